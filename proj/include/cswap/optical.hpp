// Copyright 2026 The cswap-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

/// Truncated Fock-space states: coherent, squeezed, cat, entangled coherent,
/// coherent-vacuum and two-mode squeezed vacuum, plus closed-form overlaps.
///
/// Operator exponentials are taken on the truncated space through a Hermitian
/// eigendecomposition, so the truncated S(xi) and D(alpha) are exactly
/// unitary there. Truncation error is reported as `deficit`: the weight a
/// state loses to the cutoff (for exponential states, measured by rebuilding
/// on a doubled space).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cswap/hilbert.hpp"

namespace cswap::optical {

inline constexpr double kDefaultMaxDeficit = 1e-3;

class CutoffError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A single- or two-mode state together with its truncation bookkeeping.
struct FockState {
  PureState state;
  std::size_t d_cut;
  double deficit;
};

namespace detail {

inline void check_cutoff(std::size_t d_cut) {
  if (d_cut < 2) throw std::invalid_argument("d_cut < 2");
}

inline void check_deficit(double deficit, double max_deficit, const char* what) {
  if (deficit > max_deficit) {
    throw CutoffError(std::string(what) + ": norm deficit " +
                      std::to_string(deficit) + " exceeds " +
                      std::to_string(max_deficit) + "; raise the cutoff");
  }
}

inline Matrix lowering(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
  return a;
}

/// exp(G) for anti-Hermitian G.
inline Matrix expm_antihermitian(const Matrix& g) {
  const Matrix h = cplx(0, -1) * g;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXd& l = es.eigenvalues();
  Eigen::VectorXcd phase(l.size());
  for (Eigen::Index i = 0; i < l.size(); ++i) phase(i) = std::polar(1.0, l(i));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix squeeze_matrix(cplx xi, std::size_t d) {
  const Matrix a = lowering(d);
  const Matrix ad = a.adjoint();
  return expm_antihermitian(0.5 * (std::conj(xi) * a * a - xi * ad * ad));
}

inline Matrix displacement_matrix(cplx alpha, std::size_t d) {
  const Matrix a = lowering(d);
  return expm_antihermitian(alpha * a.adjoint() - std::conj(alpha) * a);
}

/// D(alpha) S(xi)|0> and D(-alpha) S(xi)|0> on a d-level space.
inline std::pair<Vector, Vector> displaced_squeezed_pair(cplx alpha, cplx xi, std::size_t d) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  v(0) = 1.0;
  if (xi != cplx(0)) v = squeeze_matrix(xi, d).col(0);
  if (alpha == cplx(0)) return {v, v};
  const Matrix D = displacement_matrix(alpha, d);
  return {D * v, D.adjoint() * v};
}

/// Keeps the first d levels of a state built on a larger space.
struct Projected {
  Vector head;
  double leak;
};

inline Projected project(const Vector& big, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  const double total = big.squaredNorm();
  return {big.head(n), big.tail(big.size() - n).squaredNorm() / total};
}

/// Truncated coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!), unnormalized.
inline Vector coherent_amplitudes(cplx alpha, std::size_t d) {
  Vector v(static_cast<Eigen::Index>(d));
  cplx term = std::exp(-0.5 * std::norm(alpha));
  for (std::size_t k = 0; k < d; ++k) {
    v(static_cast<Eigen::Index>(k)) = term;
    term *= alpha / std::sqrt(double(k + 1));
  }
  return v;
}

}  // namespace detail

inline Operator annihilation(std::size_t d_cut) {
  detail::check_cutoff(d_cut);
  return {SiteLayout({d_cut}), detail::lowering(d_cut)};
}

inline Operator creation(std::size_t d_cut) {
  return annihilation(d_cut).adjoint();
}

inline Operator number(std::size_t d_cut) {
  detail::check_cutoff(d_cut);
  Matrix n = Matrix::Zero(static_cast<Eigen::Index>(d_cut),
                          static_cast<Eigen::Index>(d_cut));
  for (std::size_t k = 0; k < d_cut; ++k) {
    n(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = double(k);
  }
  return {SiteLayout({d_cut}), n};
}

inline double mean_photon_number(const PureState& psi) {
  double m = 0.0;
  for (std::size_t k = 0; k < psi.dim(); ++k) m += double(k) * std::norm(psi.amplitude(k));
  return m;
}

/// <beta|alpha> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(beta) alpha).
inline cplx coherent_overlap_analytic(cplx alpha, cplx beta) {
  return std::exp(-0.5 * std::norm(alpha) - 0.5 * std::norm(beta) +
                  std::conj(beta) * alpha);
}

inline FockState coherent(cplx alpha, std::size_t d_cut,
                          double max_deficit = kDefaultMaxDeficit) {
  detail::check_cutoff(d_cut);
  auto r = PureState::renormalize(SiteLayout({d_cut}),
                                  detail::coherent_amplitudes(alpha, d_cut));
  detail::check_deficit(r.deficit, max_deficit, "coherent");
  return {std::move(r.state), d_cut, std::max(r.deficit, 0.0)};
}

inline Operator squeeze_operator(cplx xi, std::size_t d_cut) {
  detail::check_cutoff(d_cut);
  return {SiteLayout({d_cut}), detail::squeeze_matrix(xi, d_cut)};
}

inline Operator displacement(cplx alpha, std::size_t d_cut) {
  detail::check_cutoff(d_cut);
  return {SiteLayout({d_cut}), detail::displacement_matrix(alpha, d_cut)};
}

/// exp(conj(xi) a b - xi a^dag b^dag) on two d_cut-level modes. Dense
/// eigendecomposition of a d_cut^2 matrix: keep d_cut small.
inline Operator two_mode_squeeze_operator(cplx xi, std::size_t d_cut) {
  detail::check_cutoff(d_cut);
  const Matrix a = detail::lowering(d_cut);
  const auto n = static_cast<Eigen::Index>(d_cut);
  const Matrix id = Matrix::Identity(n, n);
  const Matrix A = cswap::detail::kron(a, id);
  const Matrix B = cswap::detail::kron(id, a);
  const Matrix g = std::conj(xi) * A * B - xi * A.adjoint() * B.adjoint();
  return {SiteLayout({d_cut, d_cut}), detail::expm_antihermitian(g)};
}

/// D(alpha) S(xi) |0> from truncated exponentials on d_cut levels. The
/// deficit is the weight above d_cut when the state is built on 2 d_cut levels.
inline FockState squeezed_coherent(cplx alpha, cplx xi, std::size_t d_cut,
                                   double max_deficit = kDefaultMaxDeficit) {
  detail::check_cutoff(d_cut);
  const double leak =
      detail::project(detail::displaced_squeezed_pair(alpha, xi, 2 * d_cut).first, d_cut).leak;
  detail::check_deficit(leak, max_deficit, "squeezed_coherent");
  auto r = PureState::renormalize(SiteLayout({d_cut}),
                                  detail::displaced_squeezed_pair(alpha, xi, d_cut).first);
  return {std::move(r.state), d_cut, leak};
}

/// N(|alpha> + e^{i phi} |-alpha>) from truncated coherent amplitudes.
inline FockState cat(cplx alpha, double phi, std::size_t d_cut,
                     double max_deficit = kDefaultMaxDeficit) {
  detail::check_cutoff(d_cut);
  const Vector v = detail::coherent_amplitudes(alpha, d_cut) +
                   std::polar(1.0, phi) * detail::coherent_amplitudes(-alpha, d_cut);
  const double exact = 2.0 + 2.0 * std::real(std::polar(1.0, phi) *
                                              coherent_overlap_analytic(-alpha, alpha));
  if (exact < 1e-24 || v.squaredNorm() < 1e-24) {
    throw std::invalid_argument("cat: superposition vanishes");
  }
  const double deficit = std::max(0.0, 1.0 - v.squaredNorm() / exact);
  detail::check_deficit(deficit, max_deficit, "cat");
  auto r = PureState::renormalize(SiteLayout({d_cut}), v);
  return {std::move(r.state), d_cut, deficit};
}

/// N(|alpha, xi> + e^{i phi} |-alpha, xi>) with |alpha, xi> = D(alpha) S(xi)|0>,
/// one state per phase. The displaced squeezed pair is built once, on
/// 2 d_cut levels, and each cat is cut back to d_cut.
inline std::vector<FockState> squeezed_cat_family(cplx alpha, cplx xi,
                                                  std::span<const double> phis,
                                                  std::size_t d_cut,
                                                  double max_deficit = kDefaultMaxDeficit) {
  detail::check_cutoff(d_cut);
  const auto [plus, minus] = detail::displaced_squeezed_pair(alpha, xi, 2 * d_cut);
  std::vector<FockState> out;
  out.reserve(phis.size());
  for (double phi : phis) {
    const Vector big = plus + std::polar(1.0, phi) * minus;
    if (big.squaredNorm() < 1e-24) {
      throw std::invalid_argument("squeezed_cat: superposition vanishes");
    }
    auto pr = detail::project(big, d_cut);
    detail::check_deficit(pr.leak, max_deficit, "squeezed_cat");
    auto r = PureState::renormalize(SiteLayout({d_cut}), std::move(pr.head));
    out.push_back({std::move(r.state), d_cut, pr.leak});
  }
  return out;
}

inline FockState squeezed_cat(cplx alpha, cplx xi, double phi, std::size_t d_cut,
                              double max_deficit = kDefaultMaxDeficit) {
  return std::move(squeezed_cat_family(alpha, xi, std::span<const double>(&phi, 1), d_cut,
                                       max_deficit)
                       .front());
}

/// Amplitudes ordered (A++, A+-, A-+, A--).
using EcsAmplitudes = std::array<cplx, 4>;

/// Exact squared norm of sum_{s,t} A_st |s alpha>|t alpha> from the
/// coherent-state Gram matrix.
inline double ecs_norm2_analytic(const EcsAmplitudes& A, cplx alpha) {
  const cplx g[2][2] = {{1.0, coherent_overlap_analytic(-alpha, alpha)},
                        {coherent_overlap_analytic(alpha, -alpha), 1.0}};
  cplx acc = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      // <s_i t_i | s_j t_j>
      acc += std::conj(A[i]) * A[j] * g[i >> 1][j >> 1] * g[i & 1][j & 1];
    }
  }
  return acc.real();
}

inline FockState ecs_general(const EcsAmplitudes& A, cplx alpha, std::size_t d_cut,
                             double max_deficit = kDefaultMaxDeficit) {
  detail::check_cutoff(d_cut);
  if (std::abs(A[0]) + std::abs(A[1]) + std::abs(A[2]) + std::abs(A[3]) == 0.0) {
    throw std::invalid_argument("ecs_general: all amplitudes zero");
  }
  const Vector p = detail::coherent_amplitudes(alpha, d_cut);
  const Vector m = detail::coherent_amplitudes(-alpha, d_cut);
  const Vector* mode[2] = {&p, &m};
  Vector v = Vector::Zero(p.size() * p.size());
  for (int i = 0; i < 4; ++i) {
    if (A[i] != cplx(0)) v += A[i] * cswap::detail::kron(*mode[i >> 1], *mode[i & 1]);
  }
  const double exact = ecs_norm2_analytic(A, alpha);
  if (exact < 1e-24) throw std::invalid_argument("ecs_general: superposition vanishes");
  const double deficit = std::max(0.0, 1.0 - v.squaredNorm() / exact);
  detail::check_deficit(deficit, max_deficit, "ecs_general");
  auto r = PureState::renormalize(SiteLayout({d_cut, d_cut}), std::move(v));
  return {std::move(r.state), d_cut, deficit};
}

inline FockState ecs_plus(cplx alpha, std::size_t d_cut,
                          double max_deficit = kDefaultMaxDeficit) {
  return ecs_general({0.0, 1.0, 1.0, 0.0}, alpha, d_cut, max_deficit);
}

/// N(|alpha>|0> + |0>|alpha>).
inline FockState ecvs(cplx alpha, std::size_t d_cut,
                      double max_deficit = kDefaultMaxDeficit) {
  detail::check_cutoff(d_cut);
  const Vector a = detail::coherent_amplitudes(alpha, d_cut);
  const Vector z = detail::coherent_amplitudes(0.0, d_cut);
  Vector v = cswap::detail::kron(a, z) + cswap::detail::kron(z, a);
  const double ov = std::norm(coherent_overlap_analytic(alpha, 0.0));
  const double exact = 2.0 + 2.0 * ov;
  const double deficit = std::max(0.0, 1.0 - v.squaredNorm() / exact);
  detail::check_deficit(deficit, max_deficit, "ecvs");
  auto r = PureState::renormalize(SiteLayout({d_cut, d_cut}), std::move(v));
  return {std::move(r.state), d_cut, deficit};
}

/// Real amplitudes with concurrence analogue `c2prime` at real amplitude
/// alpha > 0: G^{-1/2} diag(cos t, sin t) G^{-1/2}, G the single-mode Gram
/// matrix of {|alpha>, |-alpha>}, sin 2t = (1 - q^2) c2prime.
inline EcsAmplitudes ecs_amplitudes_for(double c2prime, double alpha) {
  if (!(c2prime >= 0.0 && c2prime <= 1.0)) {
    throw std::invalid_argument("ecs_amplitudes_for: c2prime outside [0, 1]");
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("ecs_amplitudes_for: alpha <= 0");
  const double q = std::exp(-2.0 * alpha * alpha);
  const double t = 0.5 * std::asin((1.0 - q * q) * c2prime);
  const double u = 1.0 / std::sqrt(1.0 + q), v = 1.0 / std::sqrt(1.0 - q);
  const double g0 = 0.5 * (u + v), g1 = 0.5 * (u - v);  // G^{-1/2} = [[g0, g1], [g1, g0]]
  const double c = std::cos(t), s = std::sin(t);
  return {g0 * g0 * c + g1 * g1 * s, g0 * g1 * (c + s), g0 * g1 * (c + s),
          g1 * g1 * c + g0 * g0 * s};
}

/// 2 N^2 |A++ A-- - A+- A-+| with N^2 from the exact Gram norm.
inline double ecs_concurrence_analogue(const EcsAmplitudes& A, cplx alpha) {
  if (std::abs(A[0]) + std::abs(A[1]) + std::abs(A[2]) + std::abs(A[3]) == 0.0) {
    throw std::invalid_argument("ecs_concurrence_analogue: all amplitudes zero");
  }
  return 2.0 * std::abs(A[0] * A[3] - A[1] * A[2]) / ecs_norm2_analytic(A, alpha);
}

/// Finite sum e^{-|a|^2} sum_{j,k<D} (1 + (-1)^{j+k}) a^j a^k / sqrt(j! k!) |jk>.
/// The deficit is measured against the exact norm sqrt(2 + 2 e^{-4|a|^2}).
inline FockState ecs_qudit_approx(cplx alpha, std::size_t D,
                                  double max_deficit = kDefaultMaxDeficit) {
  detail::check_cutoff(D);
  const Vector c = detail::coherent_amplitudes(alpha, D);
  Vector v(static_cast<Eigen::Index>(D * D));
  for (std::size_t j = 0; j < D; ++j) {
    for (std::size_t k = 0; k < D; ++k) {
      const double par = (j + k) % 2 == 0 ? 2.0 : 0.0;
      v(static_cast<Eigen::Index>(j * D + k)) =
          par * c(static_cast<Eigen::Index>(j)) * c(static_cast<Eigen::Index>(k));
    }
  }
  const double exact = 2.0 + 2.0 * std::exp(-4.0 * std::norm(alpha));
  const double deficit = 1.0 - v.squaredNorm() / exact;
  detail::check_deficit(deficit, max_deficit, "ecs_qudit_approx");
  auto r = PureState::renormalize(SiteLayout({D, D}), std::move(v));
  return {std::move(r.state), D, deficit};
}

/// (1/cosh r) sum_{j<D} (-e^{i theta} tanh r)^j |jj>, renormalized.
inline FockState tmsv_qudit(double r, double theta, std::size_t D,
                            double max_deficit = kDefaultMaxDeficit) {
  detail::check_cutoff(D);
  if (r < 0) throw std::invalid_argument("tmsv_qudit: r < 0");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(D * D));
  const cplx q = -std::polar(std::tanh(r), theta);
  cplx term = 1.0 / std::cosh(r);
  for (std::size_t j = 0; j < D; ++j) {
    v(static_cast<Eigen::Index>(j * D + j)) = term;
    term *= q;
  }
  const double deficit = 1.0 - v.squaredNorm();
  detail::check_deficit(deficit, max_deficit, "tmsv_qudit");
  auto res = PureState::renormalize(SiteLayout({D, D}), std::move(v));
  return {std::move(res.state), D, deficit};
}

// ---------------------------------------------------------------------------
// closed forms

/// Equivalence-test P(1) for a coherent state against the same state squeezed.
inline double squeezed_coherent_p1_analytic(double r) {
  return 0.5 - 0.5 / std::cosh(r);
}

struct SqueezedCatP1 {
  double full_angle;  // cos(phi_-) and cos(phi_+)
  double half_angle;  // cos(phi_-/2) and cos(phi_+/2)
};

/// Equivalence-test P(1) between N1(|a> + e^{i phi1}|-a>) and the cat with
/// real squeeze r and phase phi2; alpha real.
inline SqueezedCatP1 squeezed_cat_p1_analytic(double alpha, double r, double phi1,
                                              double phi2) {
  const double n1 = 1.0 / std::sqrt(2.0 + 2.0 * std::exp(-2 * alpha * alpha) * std::cos(phi1));
  const double n2 = 1.0 / std::sqrt(
      2.0 + 2.0 * std::exp(-2 * alpha * alpha * std::exp(2 * r)) * std::cos(phi2));
  const double e = std::exp(-2 * alpha * alpha * (1 + std::tanh(r)));
  const double pre = 2.0 * (n1 * n2) * (n1 * n2) / std::cosh(r);
  const double pm = phi2 - phi1, pp = phi1 + phi2;
  const double a = std::cos(pm) + e * std::cos(pp);
  const double b = std::cos(pm / 2) + e * std::cos(pp / 2);
  return {0.5 - pre * a * a, 0.5 - pre * b * b};
}

inline double ecvs_p11_closed(double alpha) {
  return 1.0 / (8.0 * (1.0 / std::cosh(alpha * alpha) + 1.0));
}

inline double ecs_plus_p11_closed(double alpha) {
  return 1.0 / (8.0 * (1.0 / std::cosh(4 * alpha * alpha) + 1.0));
}

/// (1 / (2 cosh^4 r)) sum_{j != k < D} tanh^{2(j+k)} r, summed term by term.
inline double tmsv_double_sum(double r, std::size_t D) {
  const double t2 = std::tanh(r) * std::tanh(r);
  std::vector<double> pw(D);
  double p = 1.0;
  for (std::size_t j = 0; j < D; ++j) { pw[j] = p; p *= t2; }
  double s = 0.0;
  for (std::size_t j = 0; j < D; ++j) {
    for (std::size_t k = 0; k < D; ++k) {
      if (j != k) s += pw[j] * pw[k];
    }
  }
  const double c2 = std::cosh(r) * std::cosh(r);
  return s / (2.0 * c2 * c2);
}

/// sum_{j<D} tanh^{2j} r / cosh^2 r, the squared norm of the finite sum.
inline double tmsv_norm2(double r, std::size_t D) {
  const double t2 = std::tanh(r) * std::tanh(r);
  double s = 0.0, p = 1.0;
  for (std::size_t j = 0; j < D; ++j) { s += p; p *= t2; }
  return s / (std::cosh(r) * std::cosh(r));
}

}  // namespace cswap::optical
