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

/// Named qubit and qudit state families. Purified mixed states put the
/// environment at site 0.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cswap/hilbert.hpp"
#include "cswap/rng.hpp"

namespace cswap::qstates {

using std::numbers::pi;

enum class Bell { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline PureState bell(Bell which) {
  const double h = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(4);
  switch (which) {
    case Bell::PhiPlus: v(0) = h; v(3) = h; break;
    case Bell::PhiMinus: v(0) = h; v(3) = -h; break;
    case Bell::PsiPlus: v(1) = h; v(2) = h; break;
    case Bell::PsiMinus: v(1) = h; v(2) = -h; break;
  }
  return PureState(SiteLayout::qubits(2), std::move(v));
}

inline PureState ghz(std::size_t n) {
  if (n < 2) throw std::invalid_argument("ghz: n < 2");
  const auto layout = SiteLayout::qubits(n);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  v(0) = v(v.size() - 1) = 1.0 / std::sqrt(2.0);
  return PureState(layout, std::move(v));
}

inline PureState w(std::size_t n) {
  if (n < 2) throw std::invalid_argument("w: n < 2");
  const auto layout = SiteLayout::qubits(n);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  for (std::size_t k = 0; k < n; ++k) {
    v(static_cast<Eigen::Index>(std::size_t{1} << k)) = 1.0 / std::sqrt(double(n));
  }
  return PureState(layout, std::move(v));
}

/// Everything except site 0, as a density matrix.
inline DensityMatrix trace_environment(const PureState& purified) {
  SiteList sys(purified.layout().size() - 1);
  for (std::size_t i = 0; i < sys.size(); ++i) sys[i] = i + 1;
  return partial_trace(purified, sys);
}

/// Two-qubit system (sites 1, 2) entangled with a one-qubit environment.
/// The system marginal has concurrence |sin 2 theta| before mixing and purity
/// 1 - C^2 sin^2(2 delta) / 2.
inline PureState mixed_bell_purified(double theta, double delta) {
  const double c = std::cos(pi / 4 + theta);
  const double s = std::sin(pi / 4 + theta);
  const double h = 1.0 / std::sqrt(2.0);
  const double e0 = h * std::cos(delta);
  const double e1 = h * std::sin(delta);
  Vector v(8);
  // index = E*4 + S1*2 + S2
  v << e0 * c, e0 * s, e0 * s, e0 * c, e1 * s, e1 * c, e1 * c, e1 * s;
  return PureState(SiteLayout::qubits(3), std::move(v));
}

/// n-qubit GHZ system entangled with a one-qubit environment; epsilon tilts
/// the copy away from the reference.
inline PureState mixed_ghz_purified(std::size_t n, double delta,
                                    double epsilon) {
  if (n < 2) throw std::invalid_argument("mixed_ghz_purified: n < 2");
  const auto layout = SiteLayout::qubits(n + 1);
  const auto N = static_cast<Eigen::Index>(std::size_t{1} << n);
  const double cd = std::cos(pi / 4 + delta), sd = std::sin(pi / 4 + delta);
  const double ce = std::cos(pi / 4 + epsilon), se = std::sin(pi / 4 + epsilon);
  Vector v = Vector::Zero(2 * N);
  v(0) = cd * ce;
  v(N - 1) = sd * se;
  v(N) = sd * ce;
  v(2 * N - 1) = cd * se;
  return PureState(layout, std::move(v));
}

enum class WVariant { Literal, Symmetrized };

/// n-qubit W system with an (n-1)-qubit environment stored as one site of
/// dimension 2^(n-1). Angles are offset from arcsin(sqrt((n-1)/n)).
/// Literal: coefficient 1/(n-1) on the environment-vacuum branch (exactly
/// normalized). Symmetrized: 1/sqrt(n-1), renormalized.
inline PureState mixed_w_purified(std::size_t n, double delta, double epsilon,
                                  WVariant variant = WVariant::Literal) {
  if (n < 3) throw std::invalid_argument("mixed_w_purified: n < 3");
  const double base = std::asin(std::sqrt(double(n - 1) / double(n)));
  const double th = base + delta;
  const double ph = base + epsilon;
  const double r = std::sqrt(double(n - 1));
  const double c0 = variant == WVariant::Literal ? 1.0 / double(n - 1) : 1.0 / r;
  const std::size_t env_dim = std::size_t{1} << (n - 1);
  std::vector<std::size_t> dims{env_dim};
  dims.insert(dims.end(), n, 2);
  const SiteLayout layout(std::move(dims));
  const std::size_t N = std::size_t{1} << n;
  const std::size_t top = std::size_t{1} << (n - 1);
  // position k (1-based, counted from the right) -> bit k-1
  auto bit = [](std::size_t k) { return std::size_t{1} << (k - 1); };
  Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  auto at = [&](std::size_t e, std::size_t s) -> cplx& {
    return v(static_cast<Eigen::Index>(e * N + s));
  };
  at(0, top) += std::cos(th) * std::cos(ph);
  for (std::size_t k = 1; k < n; ++k) at(0, bit(k)) += c0 * std::sin(th) * std::sin(ph);
  for (std::size_t j = 1; j < n; ++j) {
    const std::size_t e = bit(j);
    at(e, bit(j)) += std::cos(th) * std::sin(ph) / r;
    at(e, top) += std::sin(th) * std::cos(ph) / r;
    for (std::size_t l = 1; l < n; ++l) {
      if (l != j) at(e, bit(l)) += std::sin(th) * std::sin(ph) / double(n - 1);
    }
  }
  return PureState::renormalize(layout, std::move(v)).state;
}

/// Qudit GHZ-like state whose two halves of the computational basis carry
/// cos(pi/4 + delta) and sin(pi/4 + delta); odd D keeps the middle level at
/// weight 1/sqrt(2).
inline PureState seesaw_qudit(std::size_t D, std::size_t n, double delta) {
  if (D < 2) throw std::invalid_argument("seesaw_qudit: D < 2");
  if (n < 2) throw std::invalid_argument("seesaw_qudit: n < 2");
  const auto layout = SiteLayout::uniform(n, D);
  const bool odd = D % 2 == 1;
  const std::size_t lo_end = odd ? (D - 1) / 2 : D / 2;  // exclusive
  const std::size_t hi_begin = odd ? (D - 1) / 2 + 1 : D / 2;
  std::size_t rep = 0;  // index step of |j>^n per unit j
  for (std::size_t s = 0; s < n; ++s) rep += layout.stride(s);
  const double pre = std::sqrt(2.0 / double(D));
  Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  for (std::size_t j = 0; j < lo_end; ++j) {
    v(static_cast<Eigen::Index>(j * rep)) = pre * std::cos(pi / 4 + delta);
  }
  if (odd) v(static_cast<Eigen::Index>((D - 1) / 2 * rep)) = pre / std::sqrt(2.0);
  for (std::size_t j = hi_begin; j < D; ++j) {
    v(static_cast<Eigen::Index>(j * rep)) = pre * std::sin(pi / 4 + delta);
  }
  return PureState(layout, std::move(v));
}

/// (cos(pi/4+delta)|00> + sin(pi/4+delta)|11>) on sites (0,1) and (2,3).
inline PureState phi_plus_plus_4(double delta) {
  Vector p(4);
  p << std::cos(pi / 4 + delta), 0, 0, std::sin(pi / 4 + delta);
  const PureState pair(SiteLayout::qubits(2), p);
  return tensor(pair, pair);
}

/// Separable pair on sites (0,1) followed by Phi+ on sites (2,3).
inline PureState chi_4(const PureState& separable_pair) {
  if (concurrence_2q(separable_pair) >= 1e-10) {
    throw std::invalid_argument("chi_4: pair is entangled");
  }
  return tensor(separable_pair, bell(Bell::PhiPlus));
}

/// Haar-random n-qubit states from normalized complex Gaussian vectors.
class HaarSampler {
 public:
  HaarSampler(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0)
      : n_(n), seed_(seed), rng_(seed, stream) {
    if (n == 0) throw std::invalid_argument("HaarSampler: n == 0");
  }

  std::size_t n() const { return n_; }
  std::uint64_t seed() const { return seed_; }

  PureState next() {
    const auto layout = SiteLayout::qubits(n_);
    Vector v(static_cast<Eigen::Index>(layout.total_dim()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double re = rng_.gaussian();
      const double im = rng_.gaussian();
      v(i) = cplx(re, im);
    }
    return PureState::renormalize(layout, std::move(v)).state;
  }

 private:
  std::size_t n_;
  std::uint64_t seed_;
  Rng rng_;
};

inline PureState haar_random(HaarSampler& sampler) { return sampler.next(); }

/// Nested-angle parametrization: amplitude k is
/// e^{i xi_k} sin(theta_0)...sin(theta_{k-1}) cos(theta_k), the last one
/// without the cosine. Needs 2^n phases and 2^n - 1 angles.
inline PureState nested_angle_state(std::size_t n, const std::vector<double>& xi,
                                    const std::vector<double>& theta) {
  const auto layout = SiteLayout::qubits(n);
  const std::size_t d = layout.total_dim();
  if (xi.size() != d || theta.size() + 1 != d) {
    throw std::invalid_argument("nested_angle_state: wrong angle counts");
  }
  Vector v(static_cast<Eigen::Index>(d));
  double prod = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double mag = k + 1 < d ? prod * std::cos(theta[k]) : prod;
    v(static_cast<Eigen::Index>(k)) = std::polar(mag, xi[k]);
    if (k + 1 < d) prod *= std::sin(theta[k]);
  }
  return PureState(layout, std::move(v));
}

/// cos(angle) GHZ_n + sin(angle) W_n.
inline PureState ghz_w_mixture(std::size_t n, double weight_angle) {
  if (n < 3) throw std::invalid_argument("ghz_w_mixture: n < 3");
  Vector v = std::cos(weight_angle) * ghz(n).amplitudes() +
             std::sin(weight_angle) * w(n).amplitudes();
  return PureState::renormalize(SiteLayout::qubits(n), std::move(v)).state;
}

}  // namespace cswap::qstates
