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

/// \file hilbert.hpp
/// Dense complex linear algebra over composite finite-dimensional Hilbert
/// spaces.
///
/// Index convention: site 0 is the leftmost ket label and the most
/// significant digit of the mixed-radix basis index (big-endian). A ket
/// written |x_n ... x_2 x_1> with x_1 on the right maps position k to
/// site n - k.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace cswap {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using SiteList = std::vector<std::size_t>;

inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 24;
inline constexpr double kStateTolerance = 1e-10;
inline constexpr double kRenormalizeWindow = 1e-6;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LayoutMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered per-site dimensions of a composite space.
class SiteLayout {
 public:
  SiteLayout() = default;

  explicit SiteLayout(std::vector<std::size_t> dims,
                      std::size_t cap = kDefaultDimensionCap)
      : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("SiteLayout: no sites");
    total_ = 1;
    for (auto d : dims_) {
      if (d < 2) throw std::invalid_argument("SiteLayout: site dimension < 2");
      if (total_ > cap / d) {
        throw DimensionError("SiteLayout: total dimension exceeds cap of " +
                             std::to_string(cap));
      }
      total_ *= d;
    }
    strides_.assign(dims_.size(), 1);
    for (std::size_t i = dims_.size() - 1; i > 0; --i) {
      strides_[i - 1] = strides_[i] * dims_[i];
    }
  }

  static SiteLayout qubits(std::size_t n) { return uniform(n, 2); }
  static SiteLayout uniform(std::size_t n, std::size_t d) {
    return SiteLayout(std::vector<std::size_t>(n, d));
  }

  std::size_t size() const { return dims_.size(); }
  bool empty() const { return dims_.empty(); }
  std::size_t dim(std::size_t site) const { return dims_.at(site); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t total_dim() const { return total_; }
  std::size_t stride(std::size_t site) const { return strides_.at(site); }

  std::size_t digit(std::size_t index, std::size_t site) const {
    return (index / strides_[site]) % dims_[site];
  }

  SiteLayout concat(const SiteLayout& other,
                    std::size_t cap = kDefaultDimensionCap) const {
    auto d = dims_;
    d.insert(d.end(), other.dims_.begin(), other.dims_.end());
    return SiteLayout(std::move(d), cap);
  }

  SiteLayout select(std::span<const std::size_t> sites) const {
    std::vector<std::size_t> d;
    d.reserve(sites.size());
    for (auto s : sites) d.push_back(dims_.at(s));
    return SiteLayout(std::move(d));
  }

  friend bool operator==(const SiteLayout& a, const SiteLayout& b) {
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

namespace detail {

inline void check_sites(const SiteLayout& layout,
                        std::span<const std::size_t> sites) {
  std::vector<bool> seen(layout.size(), false);
  for (auto s : sites) {
    if (s >= layout.size()) throw std::out_of_range("site index out of range");
    if (seen[s]) throw std::invalid_argument("repeated site index");
    seen[s] = true;
  }
}

inline SiteList complement(const SiteLayout& layout,
                           std::span<const std::size_t> sites) {
  std::vector<bool> in(layout.size(), false);
  for (auto s : sites) in[s] = true;
  SiteList rest;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (!in[i]) rest.push_back(i);
  }
  return rest;
}

/// Offsets into the full index for every mixed-radix assignment of `sites`,
/// enumerated with sites[0] as the most significant digit.
inline std::vector<std::size_t> site_offsets(
    const SiteLayout& layout, std::span<const std::size_t> sites) {
  std::vector<std::size_t> offsets{0};
  for (auto s : sites) {
    const auto d = layout.dim(s);
    const auto st = layout.stride(s);
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * d);
    for (auto o : offsets) {
      for (std::size_t k = 0; k < d; ++k) next.push_back(o + k * st);
    }
    offsets = std::move(next);
  }
  return offsets;
}

inline void require_same_layout(const SiteLayout& a, const SiteLayout& b,
                                const char* what) {
  if (!(a == b)) throw LayoutMismatch(std::string(what) + ": layout mismatch");
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

struct trusted_t {};
inline constexpr trusted_t trusted{};

}  // namespace detail

/// Normalized amplitude vector over a SiteLayout.
class PureState {
 public:
  /// Normalizes when the norm is within 1e-6 of one; rejects otherwise.
  PureState(SiteLayout layout, Vector amplitudes)
      : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != layout_.total_dim()) {
      throw DimensionError("PureState: amplitude count != total dimension");
    }
    const double norm = amps_.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kRenormalizeWindow) {
      throw std::invalid_argument("PureState: norm " + std::to_string(norm) +
                                  " too far from 1");
    }
    amps_ /= norm;
  }

  PureState(detail::trusted_t, SiteLayout layout, Vector amplitudes)
      : layout_(std::move(layout)), amps_(std::move(amplitudes)) {}

  /// Result of an explicit renormalization: `deficit` is 1 - |v|^2 of the
  /// input vector.
  struct Renormalized;
  static Renormalized renormalize(SiteLayout layout, Vector amplitudes);

  static PureState basis(const SiteLayout& layout, std::size_t index) {
    if (index >= layout.total_dim()) throw std::out_of_range("basis index");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(detail::trusted, layout, std::move(v));
  }

  /// Basis state from per-site digits, site 0 first.
  static PureState basis(const SiteLayout& layout,
                         std::span<const std::size_t> digits) {
    if (digits.size() != layout.size()) {
      throw std::invalid_argument("basis: digit count != site count");
    }
    std::size_t index = 0;
    for (std::size_t s = 0; s < digits.size(); ++s) {
      if (digits[s] >= layout.dim(s)) throw std::out_of_range("basis digit");
      index += digits[s] * layout.stride(s);
    }
    return basis(layout, index);
  }

  const SiteLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amps_; }
  cplx amplitude(std::size_t index) const {
    return amps_(static_cast<Eigen::Index>(index));
  }
  std::size_t dim() const { return layout_.total_dim(); }

 private:
  SiteLayout layout_;
  Vector amps_;
};

struct PureState::Renormalized {
  PureState state;
  double deficit;
};

inline PureState::Renormalized PureState::renormalize(SiteLayout layout,
                                                      Vector amplitudes) {
  if (static_cast<std::size_t>(amplitudes.size()) != layout.total_dim()) {
    throw DimensionError("renormalize: amplitude count != total dimension");
  }
  const double n2 = amplitudes.squaredNorm();
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw std::invalid_argument("renormalize: zero or non-finite vector");
  }
  amplitudes /= std::sqrt(n2);
  return {PureState(detail::trusted, std::move(layout), std::move(amplitudes)),
          1.0 - n2};
}

/// Positive, unit-trace, Hermitian matrix over a SiteLayout.
class DensityMatrix {
 public:
  DensityMatrix(SiteLayout layout, Matrix matrix)
      : layout_(std::move(layout)), rho_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(layout_.total_dim());
    if (rho_.rows() != d || rho_.cols() != d) {
      throw DimensionError("DensityMatrix: matrix size != total dimension");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kStateTolerance) {
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    if (std::abs(rho_.trace() - cplx(1.0)) > kStateTolerance) {
      throw std::invalid_argument("DensityMatrix: trace != 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kStateTolerance) {
      throw std::invalid_argument("DensityMatrix: negative eigenvalue");
    }
  }

  DensityMatrix(detail::trusted_t, SiteLayout layout, Matrix matrix)
      : layout_(std::move(layout)), rho_(std::move(matrix)) {}

  static DensityMatrix from_pure(const PureState& psi) {
    return {detail::trusted, psi.layout(),
            psi.amplitudes() * psi.amplitudes().adjoint()};
  }

  /// Convex mixture sum_k p_k |psi_k><psi_k|; weights must sum to one.
  static DensityMatrix mixture(std::span<const double> weights,
                               std::span<const PureState> states) {
    if (weights.size() != states.size() || states.empty()) {
      throw std::invalid_argument("mixture: size mismatch");
    }
    Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(states[0].dim()),
                              static_cast<Eigen::Index>(states[0].dim()));
    for (std::size_t k = 0; k < states.size(); ++k) {
      detail::require_same_layout(states[0].layout(), states[k].layout(),
                                  "mixture");
      if (weights[k] < 0) throw std::invalid_argument("mixture: weight < 0");
      rho += weights[k] * states[k].amplitudes() *
             states[k].amplitudes().adjoint();
    }
    return DensityMatrix(states[0].layout(), std::move(rho));
  }

  const SiteLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return rho_; }
  std::size_t dim() const { return layout_.total_dim(); }

 private:
  SiteLayout layout_;
  Matrix rho_;
};

/// A square matrix acting on a SiteLayout. Unitarity is not enforced.
class Operator {
 public:
  Operator(SiteLayout layout, Matrix matrix)
      : layout_(std::move(layout)), m_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(layout_.total_dim());
    if (m_.rows() != d || m_.cols() != d) {
      throw DimensionError("Operator: matrix size != total dimension");
    }
  }

  static Operator identity(const SiteLayout& layout) {
    const auto d = static_cast<Eigen::Index>(layout.total_dim());
    return {layout, Matrix::Identity(d, d)};
  }

  const SiteLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return m_; }
  Operator adjoint() const { return {layout_, m_.adjoint()}; }

  friend Operator operator*(const Operator& a, const Operator& b) {
    detail::require_same_layout(a.layout_, b.layout_, "operator product");
    return {a.layout_, a.m_ * b.m_};
  }

 private:
  SiteLayout layout_;
  Matrix m_;
};

using State = std::variant<PureState, DensityMatrix>;

inline const SiteLayout& layout_of(const State& s) {
  return std::visit([](const auto& x) -> const SiteLayout& { return x.layout(); },
                    s);
}

inline DensityMatrix to_density(const State& s) {
  if (const auto* p = std::get_if<PureState>(&s)) {
    return DensityMatrix::from_pure(*p);
  }
  return std::get<DensityMatrix>(s);
}

// ---------------------------------------------------------------------------
// tensor

inline PureState tensor(const PureState& a, const PureState& b) {
  return {detail::trusted, a.layout().concat(b.layout()),
          detail::kron(a.amplitudes(), b.amplitudes())};
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return {detail::trusted, a.layout().concat(b.layout()),
          detail::kron(a.matrix(), b.matrix())};
}

inline Operator tensor(const Operator& a, const Operator& b) {
  return {a.layout().concat(b.layout()), detail::kron(a.matrix(), b.matrix())};
}

/// Runtime-kind tensor; both arguments must hold the same alternative.
inline State tensor(const State& a, const State& b) {
  if (a.index() != b.index()) {
    throw std::invalid_argument("tensor: mixed state kinds");
  }
  if (a.index() == 0) {
    return tensor(std::get<PureState>(a), std::get<PureState>(b));
  }
  return tensor(std::get<DensityMatrix>(a), std::get<DensityMatrix>(b));
}

// ---------------------------------------------------------------------------
// scalars

/// <a|b>, conjugate-linear in `a`.
inline cplx inner_product(const PureState& a, const PureState& b) {
  detail::require_same_layout(a.layout(), b.layout(), "inner_product");
  return a.amplitudes().dot(b.amplitudes());
}

inline double fidelity_pure(const PureState& a, const PureState& b) {
  return std::norm(inner_product(a, b));
}

/// Amplitude matrix with rows indexed by `keep` and columns by the rest.
inline Matrix amplitude_matrix(const PureState& psi,
                               std::span<const std::size_t> keep) {
  const auto& layout = psi.layout();
  detail::check_sites(layout, keep);
  const auto rest = detail::complement(layout, keep);
  const auto rows = detail::site_offsets(layout, keep);
  const auto cols = detail::site_offsets(layout, rest);
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(cols.size()));
  const auto& v = psi.amplitudes();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          v(static_cast<Eigen::Index>(rows[r] + cols[c]));
    }
  }
  return m;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   std::span<const std::size_t> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  const auto& layout = rho.layout();
  detail::check_sites(layout, keep);
  const auto rest = detail::complement(layout, keep);
  const auto kk = detail::site_offsets(layout, keep);
  const auto rr = detail::site_offsets(layout, rest);
  const auto n = static_cast<Eigen::Index>(kk.size());
  Matrix out = Matrix::Zero(n, n);
  const auto& m = rho.matrix();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      cplx acc = 0;
      for (auto r : rr) {
        acc += m(static_cast<Eigen::Index>(kk[static_cast<std::size_t>(i)] + r),
                 static_cast<Eigen::Index>(kk[static_cast<std::size_t>(j)] + r));
      }
      out(i, j) = acc;
    }
  }
  return {detail::trusted, layout.select(keep), std::move(out)};
}

/// Reduced state of a pure state, computed from its amplitude matrix.
inline DensityMatrix partial_trace(const PureState& psi,
                                   std::span<const std::size_t> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  const Matrix m = amplitude_matrix(psi, keep);
  return {detail::trusted, psi.layout().select(keep), m * m.adjoint()};
}

inline DensityMatrix partial_trace(const State& s,
                                   std::span<const std::size_t> keep) {
  return std::visit([&](const auto& x) { return partial_trace(x, keep); }, s);
}

inline double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.matrix().squaredNorm();
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(),
                                           Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = std::max(es.eigenvalues()(i), 0.0);
    if (l > 0.0) s -= l * std::log(l);
  }
  return s;
}

inline double concurrence_2q(const PureState& psi) {
  if (!(psi.layout() == SiteLayout::qubits(2))) {
    throw LayoutMismatch("concurrence_2q: layout must be [2,2]");
  }
  const auto& a = psi.amplitudes();
  return 2.0 * std::abs(a(0) * a(3) - a(1) * a(2));
}

/// Singular values of the amplitude matrix across the cut keep | rest.
inline Eigen::VectorXd schmidt_coefficients(const PureState& psi,
                                            std::span<const std::size_t> keep) {
  Eigen::JacobiSVD<Matrix> svd(amplitude_matrix(psi, keep));
  return svd.singularValues();
}

// ---------------------------------------------------------------------------
// operators

inline PureState apply(const Operator& op, const PureState& psi) {
  if (op.layout().total_dim() != psi.dim()) {
    throw DimensionError("apply: dimension mismatch");
  }
  return PureState(psi.layout(), op.matrix() * psi.amplitudes());
}

inline DensityMatrix apply(const Operator& op, const DensityMatrix& rho) {
  if (op.layout().total_dim() != rho.dim()) {
    throw DimensionError("apply: dimension mismatch");
  }
  return DensityMatrix(rho.layout(),
                       op.matrix() * rho.matrix() * op.matrix().adjoint());
}

/// In-place application of `op` to the given ordered sites of a raw
/// amplitude vector.
inline void apply_on_sites(Vector& amps, const SiteLayout& layout,
                           const Matrix& op,
                           std::span<const std::size_t> sites) {
  detail::check_sites(layout, sites);
  const auto local = detail::site_offsets(layout, sites);
  if (static_cast<std::size_t>(op.rows()) != local.size() ||
      op.rows() != op.cols()) {
    throw DimensionError("apply_on_sites: operator size mismatch");
  }
  const auto rest = detail::site_offsets(layout, detail::complement(layout, sites));
  Vector buf(static_cast<Eigen::Index>(local.size()));
  for (auto r : rest) {
    for (std::size_t i = 0; i < local.size(); ++i) {
      buf(static_cast<Eigen::Index>(i)) =
          amps(static_cast<Eigen::Index>(r + local[i]));
    }
    const Vector out = op * buf;
    for (std::size_t i = 0; i < local.size(); ++i) {
      amps(static_cast<Eigen::Index>(r + local[i])) =
          out(static_cast<Eigen::Index>(i));
    }
  }
}

/// Lifts `op` (acting on the listed sites, in order) to the full layout.
inline Operator embed(const Operator& op, const SiteLayout& layout,
                      std::span<const std::size_t> sites) {
  detail::check_sites(layout, sites);
  if (!(op.layout() == layout.select(sites))) {
    throw DimensionError("embed: operator layout does not match chosen sites");
  }
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  Matrix full = Matrix::Identity(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    Vector col = full.col(c);
    apply_on_sites(col, layout, op.matrix(), sites);
    full.col(c) = col;
  }
  return {layout, std::move(full)};
}

inline bool is_unitary(const Operator& op, double tol = 1e-10) {
  const auto& m = op.matrix();
  const Matrix dev = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return dev.cwiseAbs().maxCoeff() <= tol;
}

namespace gates {

inline Operator hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  Matrix m(2, 2);
  m << h, h, h, -h;
  return {SiteLayout::qubits(1), m};
}

inline Operator pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return {SiteLayout::qubits(1), m};
}

/// First qubit controls, second is the target.
inline Operator cnot() {
  Matrix m = Matrix::Identity(4, 4);
  m.block(2, 2, 2, 2) << 0, 1, 1, 0;
  return {SiteLayout::qubits(2), m};
}

/// First two qubits control, third is the target.
inline Operator toffoli() {
  Matrix m = Matrix::Identity(8, 8);
  m.block(6, 6, 2, 2) << 0, 1, 1, 0;
  return {SiteLayout::qubits(3), m};
}

/// Exchange of two d-dimensional sites.
inline Operator swap(std::size_t d = 2) {
  const SiteLayout layout({d, d});
  const auto n = static_cast<Eigen::Index>(d * d);
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      m(static_cast<Eigen::Index>(j * d + i), static_cast<Eigen::Index>(i * d + j)) = 1.0;
    }
  }
  return {layout, m};
}

/// Qubit control on site 0, swapping sites 1 and 2 of dimension d.
inline Operator controlled_swap(std::size_t d = 2) {
  const SiteLayout layout({2, d, d});
  const auto n = static_cast<Eigen::Index>(d * d);
  Matrix m = Matrix::Identity(2 * n, 2 * n);
  m.block(n, n, n, n) = swap(d).matrix();
  return {layout, m};
}

}  // namespace gates

}  // namespace cswap
