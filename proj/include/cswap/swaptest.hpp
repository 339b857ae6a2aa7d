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

/// Controlled-SWAP tests between two inputs over the same layout.
///
/// Two engines compute the exact control-register distribution:
///   - swap_expectation_test expands P(z) over subsets T of groups,
///       P(z) = 2^-m sum_T (-1)^{|z & T|} Tr[rho_a^(T) rho_b^(T)],
///     using only marginal overlaps;
///   - cswap_circuit_test simulates the statevector of both inputs (purified
///     when mixed) plus m ancillas through H, controlled group swaps and H.
///
/// Distributions are stored by group mask: bit g is group g's control. The
/// BitOrder only affects how masks are printed and parsed as bitstrings.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cswap/hilbert.hpp"
#include "cswap/optical.hpp"

namespace cswap {

class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class BitOrder { GroupFirst, GroupLast };

inline const char* to_string(BitOrder o) {
  return o == BitOrder::GroupFirst ? "GROUP_FIRST" : "GROUP_LAST";
}

inline BitOrder parse_bit_order(std::string_view s) {
  if (s == "GROUP_FIRST") return BitOrder::GroupFirst;
  if (s == "GROUP_LAST") return BitOrder::GroupLast;
  throw std::invalid_argument("unknown bit order: " + std::string(s));
}

/// Disjoint site groups, one control qubit per group.
class SwapGroupSpec {
 public:
  SwapGroupSpec(SiteLayout layout, std::vector<SiteList> groups)
      : layout_(std::move(layout)), groups_(std::move(groups)) {
    if (groups_.empty()) throw std::invalid_argument("SwapGroupSpec: no groups");
    if (groups_.size() > 24) throw std::invalid_argument("SwapGroupSpec: too many groups");
    std::vector<bool> seen(layout_.size(), false);
    for (const auto& g : groups_) {
      if (g.empty()) throw std::invalid_argument("SwapGroupSpec: empty group");
      for (auto s : g) {
        if (s >= layout_.size()) throw std::out_of_range("SwapGroupSpec: site out of range");
        if (seen[s]) throw std::invalid_argument("SwapGroupSpec: groups overlap");
        seen[s] = true;
      }
    }
    covers_all_ = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  }

  static SwapGroupSpec per_site(const SiteLayout& layout) {
    std::vector<SiteList> g;
    for (std::size_t s = 0; s < layout.size(); ++s) g.push_back({s});
    return {layout, std::move(g)};
  }

  static SwapGroupSpec whole(const SiteLayout& layout) {
    SiteList all(layout.size());
    for (std::size_t s = 0; s < all.size(); ++s) all[s] = s;
    return {layout, {all}};
  }

  static SwapGroupSpec bipartite(const SiteLayout& layout, SiteList cut) {
    std::vector<bool> in(layout.size(), false);
    for (auto s : cut) {
      if (s >= layout.size()) throw std::out_of_range("bipartite: site out of range");
      in[s] = true;
    }
    SiteList rest;
    for (std::size_t s = 0; s < layout.size(); ++s) {
      if (!in[s]) rest.push_back(s);
    }
    if (cut.empty() || rest.empty()) {
      throw std::invalid_argument("bipartite: cut must be a nonempty proper subset");
    }
    return {layout, {std::move(cut), std::move(rest)}};
  }

  const SiteLayout& layout() const { return layout_; }
  const std::vector<SiteList>& groups() const { return groups_; }
  std::size_t m() const { return groups_.size(); }
  bool covers_all() const { return covers_all_; }

  /// Sites in the union of the groups selected by `mask`, in site order.
  SiteList union_sites(std::uint32_t mask) const {
    SiteList u;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      if (mask >> g & 1u) u.insert(u.end(), groups_[g].begin(), groups_[g].end());
    }
    std::sort(u.begin(), u.end());
    return u;
  }

 private:
  SiteLayout layout_;
  std::vector<SiteList> groups_;
  bool covers_all_ = false;
};

struct ParityTriple {
  double all_zero;
  double even_nonzero;
  double odd;
};

/// Exact probabilities over the m control bits.
class ControlDistribution {
 public:
  /// Clamps values in [-1e-12, 0) and renormalizes; anything more negative,
  /// or a total off by more than 1e-10, is a logic error.
  ControlDistribution(std::size_t m, std::vector<double> probs,
                      BitOrder order = BitOrder::GroupFirst)
      : m_(m), probs_(std::move(probs)), order_(order) {
    if (probs_.size() != (std::size_t{1} << m_)) {
      throw std::invalid_argument("ControlDistribution: wrong size");
    }
    double sum = 0.0;
    for (auto& p : probs_) {
      if (!std::isfinite(p) || p < -1e-12) {
        throw InternalConsistencyError("ControlDistribution: probability " +
                                       std::to_string(p));
      }
      if (p < 0) p = 0;
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-10) {
      throw InternalConsistencyError("ControlDistribution: total " +
                                     std::to_string(sum));
    }
    for (auto& p : probs_) p /= sum;
  }

  std::size_t m() const { return m_; }
  BitOrder bit_order() const { return order_; }
  const std::vector<double>& by_mask() const { return probs_; }
  double at_mask(std::uint32_t mask) const { return probs_.at(mask); }

  ControlDistribution with_bit_order(BitOrder o) const {
    ControlDistribution c = *this;
    c.order_ = o;
    return c;
  }

  std::string bitstring(std::uint32_t mask) const {
    std::string s(m_, '0');
    for (std::size_t g = 0; g < m_; ++g) {
      if (mask >> g & 1u) s[order_ == BitOrder::GroupFirst ? g : m_ - 1 - g] = '1';
    }
    return s;
  }

  std::uint32_t mask_of(std::string_view bits) const {
    if (bits.size() != m_) throw std::invalid_argument("bitstring length != m");
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (bits[i] != '0' && bits[i] != '1') throw std::invalid_argument("bad bitstring");
      const std::size_t g = order_ == BitOrder::GroupFirst ? i : m_ - 1 - i;
      if (bits[i] == '1') mask |= 1u << g;
    }
    return mask;
  }

  double prob(std::string_view bits) const { return probs_[mask_of(bits)]; }

  ParityTriple parity() const {
    ParityTriple t{probs_[0], 0.0, 0.0};
    for (std::size_t z = 1; z < probs_.size(); ++z) {
      (std::popcount(z) % 2 ? t.odd : t.even_nonzero) += probs_[z];
    }
    return t;
  }
  double all_zero() const { return probs_[0]; }
  double odd() const { return parity().odd; }
  double even_nonzero() const { return parity().even_nonzero; }
  double all_one() const { return probs_.back(); }

 private:
  std::size_t m_;
  std::vector<double> probs_;
  BitOrder order_;
};

namespace detail {

inline void require_spec_layout(const State& a, const State& b,
                                const SwapGroupSpec& spec) {
  require_same_layout(layout_of(a), layout_of(b), "swap test inputs");
  require_same_layout(layout_of(a), spec.layout(), "swap test spec");
}

/// Tr[rho_a rho_b] for the marginals of two states on `sites`.
inline double marginal_overlap(const State& a, const State& b,
                               std::span<const std::size_t> sites) {
  const auto* pa = std::get_if<PureState>(&a);
  const auto* pb = std::get_if<PureState>(&b);
  if (pa && pb) {
    const Matrix ma = amplitude_matrix(*pa, sites);
    const Matrix mb = amplitude_matrix(*pb, sites);
    if (ma.rows() <= ma.cols()) {
      const Matrix ra = ma * ma.adjoint();
      const Matrix rb = mb * mb.adjoint();
      return (ra.array() * rb.conjugate().array()).sum().real();
    }
    return (ma.adjoint() * mb).squaredNorm();
  }
  const Matrix ra = partial_trace(a, sites).matrix();
  const Matrix rb = partial_trace(b, sites).matrix();
  return (ra.array() * rb.conjugate().array()).sum().real();
}

/// A pure vector standing in for a state: either the state itself or a
/// purification with one environment site in front.
struct Register {
  SiteLayout layout;
  Vector amps;
  std::size_t offset;  // index of system site 0
};

inline Register to_register(const State& s) {
  if (const auto* p = std::get_if<PureState>(&s)) {
    return {p->layout(), p->amplitudes(), 0};
  }
  const auto& rho = std::get<DensityMatrix>(s);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  const auto& l = es.eigenvalues();
  const double lmax = l.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < l.size(); ++k) {
    if (l(k) > 1e-14 * std::max(lmax, 1.0)) keep.push_back(k);
  }
  const std::size_t env = std::max<std::size_t>(keep.size(), 2);
  std::vector<std::size_t> dims{env};
  dims.insert(dims.end(), rho.layout().dims().begin(), rho.layout().dims().end());
  SiteLayout layout(std::move(dims));
  const auto d = static_cast<Eigen::Index>(rho.dim());
  Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    v.segment(static_cast<Eigen::Index>(k) * d, d) =
        std::sqrt(l(keep[k])) * es.eigenvectors().col(keep[k]);
  }
  v.normalize();
  return {std::move(layout), std::move(v), 1};
}

}  // namespace detail

inline ControlDistribution swap_expectation_test(const State& a, const State& b,
                                                 const SwapGroupSpec& spec,
                                                 BitOrder order = BitOrder::GroupFirst) {
  detail::require_spec_layout(a, b, spec);
  const std::size_t m = spec.m();
  const std::size_t M = std::size_t{1} << m;
  std::vector<double> tr(M, 1.0);
  for (std::uint32_t t = 1; t < M; ++t) {
    tr[t] = detail::marginal_overlap(a, b, spec.union_sites(t));
  }
  std::vector<double> p(M, 0.0);
  for (std::uint32_t z = 0; z < M; ++z) {
    double acc = 0.0;
    for (std::uint32_t t = 0; t < M; ++t) {
      acc += (std::popcount(z & t) % 2 ? -1.0 : 1.0) * tr[t];
    }
    p[z] = acc / double(M);
  }
  return {m, std::move(p), order};
}

/// Statevector simulation of H - controlled group swaps - H on m ancillas.
inline ControlDistribution cswap_circuit_test(const State& a, const State& b,
                                              const SwapGroupSpec& spec,
                                              BitOrder order = BitOrder::GroupFirst,
                                              std::size_t cap = kDefaultDimensionCap) {
  detail::require_spec_layout(a, b, spec);
  const auto ra = detail::to_register(a);
  const auto rb = detail::to_register(b);
  const std::size_t m = spec.m();
  const std::size_t M = std::size_t{1} << m;
  const SiteLayout full = ra.layout.concat(rb.layout, cap).concat(SiteLayout::qubits(m), cap);
  const std::size_t nA = ra.layout.size();
  const std::size_t nB = rb.layout.size();

  Vector psi = detail::kron(detail::kron(ra.amps, rb.amps), [&] {
    Vector z = Vector::Zero(static_cast<Eigen::Index>(M));
    z(0) = 1.0;
    return z;
  }());

  const Matrix h = gates::hadamard().matrix();
  auto hadamards = [&] {
    for (std::size_t g = 0; g < m; ++g) {
      const std::size_t site = nA + nB + g;
      apply_on_sites(psi, full, h, std::span<const std::size_t>(&site, 1));
    }
  };

  hadamards();
  for (std::size_t g = 0; g < m; ++g) {
    const std::size_t anc_stride = full.stride(nA + nB + g);
    std::vector<std::pair<std::size_t, std::size_t>> st;  // (stride in A, stride in B)
    for (auto s : spec.groups()[g]) {
      st.emplace_back(full.stride(ra.offset + s), full.stride(nA + rb.offset + s));
    }
    const std::vector<std::size_t>& dims = spec.layout().dims();
    Vector out = psi;
    for (std::size_t idx = 0; idx < full.total_dim(); ++idx) {
      if ((idx / anc_stride) % 2 == 0) continue;
      std::size_t src = idx;
      for (std::size_t k = 0; k < st.size(); ++k) {
        const std::size_t d = dims[spec.groups()[g][k]];
        const std::size_t da = (idx / st[k].first) % d;
        const std::size_t db = (idx / st[k].second) % d;
        src = src - da * st[k].first - db * st[k].second + db * st[k].first +
              da * st[k].second;
      }
      out(static_cast<Eigen::Index>(idx)) = psi(static_cast<Eigen::Index>(src));
    }
    psi = std::move(out);
  }
  hadamards();

  std::vector<double> p(M, 0.0);
  for (std::size_t idx = 0; idx < full.total_dim(); ++idx) {
    const std::size_t low = idx % M;  // ancilla g sits at bit m-1-g
    std::uint32_t mask = 0;
    for (std::size_t g = 0; g < m; ++g) {
      if (low >> (m - 1 - g) & 1u) mask |= 1u << g;
    }
    p[mask] += std::norm(psi(static_cast<Eigen::Index>(idx)));
  }
  return {m, std::move(p), order};
}

/// Circuit dimension needed by cswap_circuit_test, or nullopt above `cap`.
inline std::optional<std::size_t> circuit_dimension(const State& a, const State& b,
                                                    std::size_t m,
                                                    std::size_t cap = kDefaultDimensionCap) {
  auto reg_dim = [](const State& s) -> std::size_t {
    if (const auto* p = std::get_if<PureState>(&s)) return p->dim();
    const auto& rho = std::get<DensityMatrix>(s);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
    const double lmax = es.eigenvalues().maxCoeff();
    std::size_t r = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      if (es.eigenvalues()(k) > 1e-14 * std::max(lmax, 1.0)) ++r;
    }
    return rho.dim() * std::max<std::size_t>(r, 2);
  };
  const std::size_t da = reg_dim(a), db = reg_dim(b);
  if (da > cap / db) return std::nullopt;
  const std::size_t ab = da * db;
  if (m >= 63 || ab > cap >> m) return std::nullopt;
  return ab << m;
}

enum class Engine { Expectation, Circuit };

inline ControlDistribution run_test(const State& a, const State& b,
                                    const SwapGroupSpec& spec,
                                    Engine engine = Engine::Expectation,
                                    BitOrder order = BitOrder::GroupFirst) {
  return engine == Engine::Expectation ? swap_expectation_test(a, b, spec, order)
                                       : cswap_circuit_test(a, b, spec, order);
}

/// One control over all sites; P(1) = 1/2 - Tr(rho_a rho_b)/2.
inline ControlDistribution equivalence_test(const State& a, const State& b,
                                            Engine engine = Engine::Expectation) {
  return run_test(a, b, SwapGroupSpec::whole(layout_of(a)), engine);
}

inline ControlDistribution full_entanglement_test(const State& a, const State& b,
                                                  Engine engine = Engine::Expectation,
                                                  BitOrder order = BitOrder::GroupFirst) {
  return run_test(a, b, SwapGroupSpec::per_site(layout_of(a)), engine, order);
}

inline ControlDistribution bipartite_test(const State& a, const State& b, SiteList cut,
                                          Engine engine = Engine::Expectation,
                                          BitOrder order = BitOrder::GroupFirst) {
  return run_test(a, b, SwapGroupSpec::bipartite(layout_of(a), std::move(cut)), engine,
                  order);
}

inline ControlDistribution two_party_test(const State& a, const State& b, std::size_t i,
                                          std::size_t j,
                                          Engine engine = Engine::Expectation,
                                          BitOrder order = BitOrder::GroupFirst) {
  if (i == j) throw std::invalid_argument("two_party_test: i == j");
  return run_test(a, b, SwapGroupSpec(layout_of(a), {{i}, {j}}), engine, order);
}

// ---------------------------------------------------------------------------
// optical equivalence

struct OpticalEquivalenceRecord {
  double numeric_p1;
  double analytic_p1;          // half-angle form
  double analytic_p1_full_angle;
  double deficit;              // worst truncation deficit of the two inputs
  std::size_t d_cut;
};

/// Coherent |alpha> against D(alpha) S(r e^{i theta})|0>.
inline OpticalEquivalenceRecord squeezed_coherent_equivalence(
    double alpha, double r, double theta, std::size_t d_cut,
    double max_deficit = optical::kDefaultMaxDeficit) {
  const auto a = optical::squeezed_coherent(alpha, 0.0, d_cut, max_deficit);
  const auto b = optical::squeezed_coherent(alpha, std::polar(r, theta), d_cut, max_deficit);
  const double p1 = equivalence_test(a.state, b.state).at_mask(1);
  const double an = optical::squeezed_coherent_p1_analytic(r);
  return {p1, an, an, std::max(a.deficit, b.deficit), d_cut};
}

/// Unsqueezed cats with phase phi1 against cats squeezed by real r, one
/// record per phase phi2.
inline std::vector<OpticalEquivalenceRecord> squeezed_cat_equivalence_scan(
    double alpha, double r, double phi1, std::span<const double> phi2, std::size_t d_cut,
    double max_deficit = optical::kDefaultMaxDeficit) {
  const auto a = optical::squeezed_cat(alpha, 0.0, phi1, d_cut, max_deficit);
  const auto bs = optical::squeezed_cat_family(alpha, r, phi2, d_cut, max_deficit);
  std::vector<OpticalEquivalenceRecord> out;
  for (std::size_t k = 0; k < bs.size(); ++k) {
    const double p1 = equivalence_test(a.state, bs[k].state).at_mask(1);
    const auto an = optical::squeezed_cat_p1_analytic(alpha, r, phi1, phi2[k]);
    out.push_back({p1, an.half_angle, an.full_angle, std::max(a.deficit, bs[k].deficit), d_cut});
  }
  return out;
}

inline OpticalEquivalenceRecord squeezed_cat_equivalence(
    double alpha, double r, double phi1, double phi2, std::size_t d_cut,
    double max_deficit = optical::kDefaultMaxDeficit) {
  return squeezed_cat_equivalence_scan(alpha, r, phi1, std::span<const double>(&phi2, 1),
                                       d_cut, max_deficit)
      .front();
}

}  // namespace cswap
