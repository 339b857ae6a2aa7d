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

/// \file experiments.hpp
/// Named parameter sweeps over the state families, evaluated on a worker
/// pool and flattened into CSV rows in grid order.

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cswap/closed_forms.hpp"
#include "cswap/csv.hpp"
#include "cswap/measures.hpp"
#include "cswap/optical.hpp"
#include "cswap/qstates.hpp"
#include "cswap/rng.hpp"
#include "cswap/shots.hpp"
#include "cswap/swaptest.hpp"

namespace cswap::lab {

/// Bad experiment id, grid override or parameter value.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An evaluation failure, tagged with the grid point that produced it.
class GridPointError : public std::runtime_error {
 public:
  GridPointError(const std::string& what, bool bad_parameters)
      : std::runtime_error(what), bad_parameters_(bad_parameters) {}
  bool bad_parameters() const { return bad_parameters_; }

 private:
  bool bad_parameters_;
};

struct Axis {
  std::string key;
  double start = 0, stop = 0;
  std::size_t steps = 1;
  bool integer = false;
  bool inner = false;  // handed to the evaluator whole instead of expanded

  std::vector<double> values() const {
    std::vector<double> v(steps);
    for (std::size_t i = 0; i < steps; ++i) {
      v[i] = steps == 1 ? start : start + (stop - start) * double(i) / double(steps - 1);
      if (integer) v[i] = std::round(v[i]);
    }
    return v;
  }
};

namespace detail {

inline double parse_number(std::string_view s, std::string_view what) {
  double v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (s.empty() || r.ec != std::errc() || r.ptr != end || !std::isfinite(v)) {
    throw UsageError("grid: bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

/// KEY=START:STOP:STEPS, or KEY=VALUE for a single point.
inline Axis parse_grid_override(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw UsageError("grid: expected KEY=START:STOP:STEPS, got '" + std::string(spec) + "'");
  }
  Axis a;
  a.key = std::string(spec.substr(0, eq));
  std::vector<std::string_view> parts;
  std::string_view rest = spec.substr(eq + 1);
  for (std::size_t p; (p = rest.find(':')) != std::string_view::npos;) {
    parts.push_back(rest.substr(0, p));
    rest.remove_prefix(p + 1);
  }
  parts.push_back(rest);
  if (parts.size() == 1) {
    a.start = a.stop = detail::parse_number(parts[0], "value");
    return a;
  }
  if (parts.size() != 3) {
    throw UsageError("grid: expected KEY=START:STOP:STEPS, got '" + std::string(spec) + "'");
  }
  a.start = detail::parse_number(parts[0], "start");
  a.stop = detail::parse_number(parts[1], "stop");
  const double steps = detail::parse_number(parts[2], "steps");
  if (steps < 1 || steps != std::floor(steps) || steps > 1e7) {
    throw UsageError("grid: steps must be a positive integer");
  }
  a.steps = static_cast<std::size_t>(steps);
  if (a.steps == 1 && a.start != a.stop) {
    throw UsageError("grid: one step needs START == STOP");
  }
  return a;
}

struct Context {
  std::uint64_t seed = kDefaultSeed;
  BitOrder bit_order = BitOrder::GroupFirst;
  std::uint64_t shots = 0;
};

struct Point {
  std::size_t index = 0;
  std::map<std::string, double, std::less<>> value;
  std::map<std::string, std::vector<double>, std::less<>> inner;

  double operator[](std::string_view key) const {
    const auto it = value.find(key);
    if (it == value.end()) throw std::logic_error("point has no key " + std::string(key));
    return it->second;
  }
  std::size_t size(std::string_view key) const {
    return static_cast<std::size_t>((*this)[key]);
  }
};

/// One output line; unset columns stay empty.
class Row {
 public:
  Row& set(const std::string& key, double v) { return put(key, csv::format(v)); }
  Row& set(const std::string& key, std::size_t v) {
    return put(key, csv::format(std::uint64_t{v}));
  }
  Row& set(const std::string& key, int v) { return put(key, std::to_string(v)); }
  Row& set(const std::string& key, bool v) { return put(key, v ? "1" : "0"); }
  Row& set(const std::string& key, const char* v) { return put(key, v); }
  Row& set(const std::string& key, std::string v) { return put(key, std::move(v)); }

  /// The distribution behind the row, sampled when shots are requested.
  Row& with(ControlDistribution d) {
    dist_ = std::move(d);
    return *this;
  }

  const std::map<std::string, std::string>& cells() const { return cells_; }
  const std::optional<ControlDistribution>& dist() const { return dist_; }

 private:
  Row& put(const std::string& key, std::string v) {
    cells_[key] = std::move(v);
    return *this;
  }
  std::map<std::string, std::string> cells_;
  std::optional<ControlDistribution> dist_;
};

struct Experiment {
  std::string id;
  std::string description;
  std::vector<Axis> axes;
  std::vector<std::string> labels;  // non-numeric parameter columns
  std::vector<std::string> outputs;
  bool randomized = false;
  std::function<std::vector<Row>(const Point&, const Context&)> eval;

  std::vector<std::string> parameter_columns() const {
    std::vector<std::string> c;
    for (const auto& a : axes) c.push_back(a.key);
    c.insert(c.end(), labels.begin(), labels.end());
    return c;
  }
};

inline const std::vector<std::string>& shot_columns() {
  static const std::vector<std::string> c{"shots",          "shot_seed",     "emp_p_all_zero",
                                          "emp_p_odd",      "emp_p_all_one", "emp_p_odd_lo",
                                          "emp_p_odd_hi"};
  return c;
}

// ---------------------------------------------------------------------------
// evaluators

namespace detail {

using std::numbers::pi;

inline void put_parity(Row& row, const ControlDistribution& d) {
  const auto t = d.parity();
  row.set("p_all_zero", t.all_zero)
      .set("p_even_nonzero", t.even_nonzero)
      .set("p_odd", t.odd)
      .set("p_all_one", d.all_one());
}

inline SwapGroupSpec system_spec(const PureState& purified) {
  std::vector<SiteList> g;
  for (std::size_t s = 1; s < purified.layout().size(); ++s) g.push_back({s});
  return {purified.layout(), std::move(g)};
}

/// Tr rho^2 of the system part of a purification with the environment on site 0.
inline double system_purity(const PureState& purified) {
  SiteList sys;
  for (std::size_t s = 1; s < purified.layout().size(); ++s) sys.push_back(s);
  return cswap::detail::marginal_overlap(purified, purified, sys);
}

inline double max_gap(const ParityTriple& a, const ParityTriple& b) {
  return std::max({std::abs(a.all_zero - b.all_zero), std::abs(a.odd - b.odd),
                   std::abs(a.even_nonzero - b.even_nonzero)});
}

inline void put_family(Row& row, const ControlDistribution& d, const ParityTriple& closed,
                       double ce_pure, double r_class) {
  put_parity(row, d);
  const double ce = measures::concentratable_from_distribution(d);
  row.set("closed_all_zero", closed.all_zero)
      .set("closed_even_nonzero", closed.even_nonzero)
      .set("closed_odd", closed.odd)
      .set("max_abs_gap_closed", max_gap(d.parity(), closed))
      .set("ce", ce)
      .set("ce_pure", ce_pure)
      .set("r_class", r_class)
      .set("ce_corrected", measures::ce_error_correction(ce, d.odd(), r_class));
  if (d.odd() > 1e-12) row.set("r_empirical", measures::ratio_R_empirical(ce - ce_pure, d.odd()));
}

inline std::vector<Row> mixed_bell(const Point& p, const Context&) {
  const double c2 = p["c2"], delta = p["delta"];
  if (c2 < 0 || c2 > 1) throw UsageError("mixed-bell: c2 outside [0, 1]");
  const double theta = 0.5 * std::asin(c2);
  const auto s = qstates::trace_environment(qstates::mixed_bell_purified(theta, delta));
  const auto d = full_entanglement_test(s, s);
  const auto c = full_entanglement_test(s, s, Engine::Circuit);
  const auto cf = closed_form::mixed_bell(theta, delta);
  Row r;
  put_parity(r, d);
  const double g = purity(s);
  double diff = 0;
  for (std::size_t z = 0; z < 4; ++z) diff = std::max(diff, std::abs(d.by_mask()[z] - c.by_mask()[z]));
  r.set("p_not_all_zero", 1 - d.all_zero())
      .set("purity", g)
      .set("half_one_minus_purity", 0.5 * (1 - g))
      .set("closed_p00", cf.p00)
      .set("closed_p_odd", cf.p_odd)
      .set("closed_p11", cf.p11)
      .set("closed_purity", cf.purity)
      .set("circuit_max_abs_diff", diff)
      .with(d);
  return {r};
}

inline std::vector<Row> mixed_ghz(const Point& p, const Context&) {
  const std::size_t n = p.size("n");
  const double delta = p["delta"], eps = p["epsilon"];
  const auto a = qstates::mixed_ghz_purified(n, delta, 0);
  const auto b = qstates::mixed_ghz_purified(n, delta, eps);
  const auto d = swap_expectation_test(a, b, system_spec(a));
  Row r;
  put_family(r, d, closed_form::ghz_mixed(n, delta, eps), 0.5 - 1.0 / closed_form::pow2(n),
             measures::ratio_R(measures::EntanglementClass::GHZ, n));
  r.set("fidelity", fidelity_pure(a, b))
      .set("closed_fidelity", closed_form::ghz_fidelity(eps))
      .set("purity", system_purity(a))
      .set("closed_purity", closed_form::ghz_purity(delta))
      .with(d);
  return {r};
}

inline std::vector<Row> mixed_w(const Point& p, const Context&) {
  const std::size_t n = p.size("n");
  const double delta = p["delta"], eps = p["epsilon"];
  const auto a = qstates::mixed_w_purified(n, delta, 0);
  const auto b = qstates::mixed_w_purified(n, delta, eps);
  const auto d = swap_expectation_test(a, b, system_spec(a));
  const auto w = qstates::w(n);
  Row r;
  const auto closed = closed_form::w_mixed(n, delta, eps);
  put_family(r, d, closed, measures::concentratable_from_purities(w),
             measures::ratio_R(measures::EntanglementClass::W, n));
  r.set("w_variant", "literal")
      .set("fidelity", fidelity_pure(a, b))
      .set("purity", system_purity(a))
      .set("purity_approx", closed_form::w_purity_approx(n, delta))
      .set("closed_discrepancy", max_gap(d.parity(), closed) > 1e-9)
      .with(d);
  return {r};
}

inline std::vector<Row> qudit_seesaw(const Point& p, const Context&) {
  const std::size_t D = p.size("D"), n = p.size("n");
  const double delta = p["delta"];
  const auto a = qstates::seesaw_qudit(D, n, 0), b = qstates::seesaw_qudit(D, n, delta);
  const auto d = full_entanglement_test(a, b);
  const auto closed = closed_form::seesaw(D, n, delta);
  const auto exact = closed_form::seesaw_exact(D, n, delta);
  Row r;
  put_family(r, d, closed, measures::concentratable_from_purities(a),
             measures::ratio_R(measures::EntanglementClass::GHZ, n));
  r.set("x_factor", closed_form::seesaw_x(D))
      .set("exact_all_zero", exact.all_zero)
      .set("exact_even_nonzero", exact.even_nonzero)
      .set("exact_odd", exact.odd)
      .set("max_abs_gap_exact", max_gap(d.parity(), exact))
      .set("fidelity", fidelity_pure(a, b))
      .set("fidelity_cos2", std::cos(delta) * std::cos(delta))
      .with(d);
  return {r};
}

inline std::vector<Row> qudit_vs_qubit(const Point& p, const Context&) {
  const std::size_t D = p.size("D");
  const auto q = qstates::seesaw_qudit(D, 2, 0);
  const auto d = full_entanglement_test(q, q);
  Row r;
  r.set("p11_qudit", d.all_one()).set("p11_limit", 0.5 - 0.5 / double(D)).with(d);
  if (std::has_single_bit(D) && D >= 2 && D <= 512) {
    const std::size_t n = std::size_t(std::countr_zero(D)) + 1;
    const auto g = qstates::ghz(n);
    const double ce = measures::concentratable_from_distribution(full_entanglement_test(g, g));
    r.set("qubit_n", n).set("ce_qubit_ghz", ce).set("abs_diff", std::abs(ce - d.all_one()));
  }
  return {r};
}

inline const char* const kBits[4] = {"00", "01", "10", "11"};

inline void put_column(Row& r, const std::string& prefix, const closed_form::Column& c) {
  for (int k = 0; k < 4; ++k) r.set(prefix + kBits[k], c[k]);
}

inline double column_gap(const ControlDistribution& d, const closed_form::Column& c) {
  double gap = 0;
  for (int k = 0; k < 4; ++k) gap = std::max(gap, std::abs(d.prob(kBits[k]) - c[k]));
  return gap;
}

inline void put_table_column(Row& r, const ControlDistribution& d,
                             const closed_form::Column& closed) {
  for (int k = 0; k < 4; ++k) r.set(std::string("p") + kBits[k], d.prob(kBits[k]));
  put_column(r, "closed_p", closed);
  const double gap = column_gap(d, closed);
  r.set("max_abs_gap", gap).set("discrepancy", gap > 1e-12).set("p_odd", d.odd());
}

inline std::vector<Row> bipartite_tables(const Point& p, const Context& ctx) {
  const double delta = p["delta"];
  const auto s = qstates::phi_plus_plus_4(delta);
  const double c = std::abs(std::cos(2 * delta)), c2 = c * c;
  struct Cut {
    const char* label;
    SiteList sites;
    closed_form::Column closed, oracle;
  };
  // Oracles: P(11) = (1 - purity of the cut) / 2 for twin pure inputs.
  const double g13 = 1 - c2 / 2;
  const Cut cuts[3] = {
      {"12-34", {0, 1}, closed_form::bipartite_12_34(c2), {1, 0, 0, 0}},
      {"13-24", {0, 2}, closed_form::bipartite_13_24(c2),
       {0.5 + 0.5 * g13 * g13, 0, 0, 0.5 - 0.5 * g13 * g13}},
      {"3-124", {2}, closed_form::bipartite_3_124(c2), {1 - c2 / 4, 0, 0, c2 / 4}}};
  std::vector<Row> rows;
  for (const auto& cut : cuts) {
    const auto d = bipartite_test(s, s, cut.sites, Engine::Expectation, ctx.bit_order);
    Row r;
    r.set("cut", cut.label).set("bit_order", to_string(ctx.bit_order)).set("concurrence", c)
        .set("c2_squared", c2);
    put_table_column(r, d, cut.closed);
    put_column(r, "oracle_p", cut.oracle);
    r.set("max_abs_gap_oracle", column_gap(d, cut.oracle));
    rows.push_back(std::move(r.with(d)));
  }
  return rows;
}

inline std::vector<Row> two_party_tables(const Point&, const Context& ctx) {
  const auto chi = qstates::chi_4(PureState::basis(SiteLayout::qubits(2), 0));
  const auto pp = qstates::phi_plus_plus_4(0);
  const std::pair<std::size_t, std::size_t> pairs[4] = {{0, 1}, {0, 2}, {1, 2}, {2, 3}};
  const char* names[4] = {"1-2", "1-3", "2-3", "3-4"};
  const auto t2 = closed_form::pairs_chi4(), t3 = closed_form::pairs_phi_plus_plus4();
  std::vector<Row> rows;
  for (int which = 0; which < 2; ++which) {
    const auto& s = which == 0 ? chi : pp;
    for (int k = 0; k < 4; ++k) {
      const auto d = two_party_test(s, s, pairs[k].first, pairs[k].second, Engine::Expectation,
                                    ctx.bit_order);
      Row r;
      r.set("state", which == 0 ? "chi4" : "phi_plus_plus4")
          .set("pair", names[k])
          .set("bit_order", to_string(ctx.bit_order))
          .set("failure_flag", measures::two_party_failure_flag(d));
      put_table_column(r, d, which == 0 ? t2[k] : t3[k]);
      rows.push_back(std::move(r.with(d)));
    }
  }
  return rows;
}

/// Every bipartition, each counted once (the cut containing site 0).
inline std::vector<SiteList> all_cuts(std::size_t n) {
  std::vector<SiteList> cuts;
  for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
    SiteList c{0};
    for (std::size_t s = 1; s < n; ++s) {
      if (!(mask >> (s - 1) & 1u)) c.push_back(s);
    }
    cuts.push_back(std::move(c));
  }
  return cuts;
}

inline std::vector<Row> haar_comparison(const Point& p, const Context& ctx) {
  const std::size_t n = p.size("n");
  const auto k = static_cast<std::uint64_t>(p["sample"]);
  qstates::HaarSampler sampler(n, ctx.seed, (std::uint64_t{n} << 32) | k);
  const auto psi = sampler.next();
  const auto g = full_entanglement_test(psi, psi);
  const double ce = measures::concentratable_from_distribution(g);
  double sum = 0, worst_odd = 0;
  const auto cuts = all_cuts(n);
  for (const auto& c : cuts) {
    const auto b = bipartite_test(psi, psi, c);
    sum += b.all_one();
    worst_odd = std::max(worst_odd, b.odd());
  }
  const double m = double(cuts.size());
  // Equal copies: the cut tests use 2 m copies, the same budget buys m general runs.
  const double general_equal = 1 - std::pow(1 - ce, m);
  Row r;
  r.set("ce", ce)
      .set("ce_purities", measures::concentratable_from_purities(psi))
      .set("p_odd", g.odd())
      .set("parity_ok", g.odd() <= 1e-12 && worst_odd <= 1e-12)
      .set("cuts", cuts.size())
      .set("sum_cut_p11", sum)
      .set("mean_cut_p11", sum / m)
      .set("max_cut_p_odd", worst_odd)
      .set("general_equal_copies", general_equal)
      .set("general_geq_summed", general_equal >= sum)
      .with(g);
  return {r};
}

inline std::vector<Row> squeezed_equiv(const Point& p, const Context&) {
  const auto rec = squeezed_coherent_equivalence(p["alpha"], p["r"], p["theta"], p.size("d_cut"));
  Row r;
  r.set("numeric_p1", rec.numeric_p1)
      .set("analytic_p1", rec.analytic_p1)
      .set("abs_err", std::abs(rec.numeric_p1 - rec.analytic_p1))
      .set("deficit", rec.deficit);
  return {r};
}

inline constexpr double kNumericSqueezeMax = 1.5;

inline std::vector<Row> squeezed_cat(const Point& p, const Context&) {
  const double alpha = p["alpha"], rr = p["r"], phi1 = p["phi1"];
  const auto& phis = p.inner.at("phi");
  std::vector<Row> rows(phis.size());
  const bool numeric = rr <= kNumericSqueezeMax + 1e-12;
  std::vector<OpticalEquivalenceRecord> recs;
  if (numeric) {
    recs = squeezed_cat_equivalence_scan(alpha, rr, phi1, phis, p.size("d_cut"));
  }
  for (std::size_t k = 0; k < phis.size(); ++k) {
    const auto an = optical::squeezed_cat_p1_analytic(alpha, rr, phi1, phis[k]);
    auto& r = rows[k];
    r.set("phi", phis[k])
        .set("numeric_region", numeric)
        .set("analytic_p1", an.half_angle)
        .set("analytic_p1_full_angle", an.full_angle);
    if (numeric) {
      r.set("numeric_p1", recs[k].numeric_p1)
          .set("abs_err", std::abs(recs[k].numeric_p1 - an.half_angle))
          .set("deficit", recs[k].deficit);
    }
  }
  return rows;
}

inline std::vector<Row> ecs_general(const Point& p, const Context&) {
  const double c2p = p["c2prime"], alpha = p["alpha"];
  Row r;
  if (alpha <= 0) {
    r.set("defined", false);
    return {r};
  }
  const auto A = optical::ecs_amplitudes_for(c2p, alpha);
  const auto s = optical::ecs_general(A, alpha, p.size("d_cut"));
  const auto d = full_entanglement_test(s.state, s.state);
  const double q = std::exp(-2 * alpha * alpha);
  r.set("defined", true)
      .set("a_pp", A[0].real())
      .set("a_pm", A[1].real())
      .set("a_mp", A[2].real())
      .set("a_mm", A[3].real())
      .set("c2prime_check", optical::ecs_concurrence_analogue(A, alpha))
      .set("concurrence", (1 - q * q) * c2p)
      .set("deficit", s.deficit);
  put_parity(r, d);
  r.with(d);
  return {r};
}


inline std::vector<Row> ecvs_vs_ecsplus(const Point& p, const Context&) {
  const double alpha = p["alpha"];
  const std::size_t d_cut = p.size("d_cut");
  const double a2 = alpha * alpha;
  struct Item {
    const char* name;
    optical::FockState s;
    double oracle, closed;
  };
  const Item items[2] = {
      {"ecvs", optical::ecvs(alpha, d_cut), 0.25 * std::pow(std::tanh(a2 / 2), 2),
       optical::ecvs_p11_closed(alpha)},
      {"ecs_plus", optical::ecs_plus(alpha, d_cut), 0.25 * std::pow(std::tanh(2 * a2), 2),
       optical::ecs_plus_p11_closed(alpha)}};
  std::vector<Row> rows;
  for (const auto& it : items) {
    const auto d = full_entanglement_test(it.s.state, it.s.state);
    Row r;
    r.set("state", it.name)
        .set("p11", d.all_one())
        .set("oracle_p11", it.oracle)
        .set("abs_err_oracle", std::abs(d.all_one() - it.oracle))
        .set("closed_p11", it.closed)
        .set("deficit", it.s.deficit);
    put_parity(r, d);
    rows.push_back(std::move(r.with(d)));
  }
  return rows;
}

inline std::vector<Row> ecs_qudit(const Point& p, const Context&) {
  const std::size_t D = p.size("D");
  const double alpha = p["alpha"];
  const auto s = optical::ecs_qudit_approx(alpha, D, 1.0);
  const double exact = 2.0 + 2.0 * std::exp(-4.0 * alpha * alpha);
  const auto d = full_entanglement_test(s.state, s.state);
  Row r;
  r.set("norm_raw", std::sqrt(exact * (1 - s.deficit)))
      .set("norm_exact", std::sqrt(exact))
      .set("norm_relative", std::sqrt(1 - s.deficit))
      .set("deficit", s.deficit)
      .set("p11_qudit", d.all_one())
      .set("p11_ecs", 0.25 * std::pow(std::tanh(2 * alpha * alpha), 2));
  put_parity(r, d);
  r.with(d);
  return {r};
}

inline std::vector<Row> tmsv(const Point& p, const Context&) {
  const std::size_t D = p.size("D");
  const double rr = p["r"];
  const auto s = optical::tmsv_qudit(rr, 0.0, D, 1.0);
  const auto d = full_entanglement_test(s.state, s.state);
  const double norm2 = optical::tmsv_norm2(rr, D);
  const double dsum = optical::tmsv_double_sum(rr, D);
  const double rescaled = dsum / (norm2 * norm2);
  Row r;
  r.set("norm2", norm2)
      .set("deficit", s.deficit)
      .set("p11", d.all_one())
      .set("double_sum", dsum)
      .set("abs_diff_double_sum", std::abs(dsum - d.all_one()))
      .set("rescaled", rescaled)
      .set("abs_diff_rescaled", std::abs(rescaled - d.all_one()))
      .set("limit", 0.5 - 0.5 / double(D));
  put_parity(r, d);
  r.with(d);
  return {r};
}

// Generic sweeps: one state family under one test.

inline std::vector<Row> sweep_row(const PureState& a, const PureState& b, bool full) {
  const auto d = full ? full_entanglement_test(a, b) : equivalence_test(a, b);
  Row r;
  put_parity(r, d);
  r.set("ce", measures::concentratable_from_distribution(d)).with(d);
  return {r};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// registry

namespace detail {

inline std::vector<std::string> cat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline const std::vector<std::string> kParity{"p_all_zero", "p_even_nonzero", "p_odd",
                                              "p_all_one"};
inline const std::vector<std::string> kFamily = cat(
    {kParity,
     {"closed_all_zero", "closed_even_nonzero", "closed_odd", "max_abs_gap_closed", "ce",
      "ce_pure", "r_class", "ce_corrected", "r_empirical"}});
inline const std::vector<std::string> kTable{
    "p00",       "p01",       "p10",       "p11",         "closed_p00", "closed_p01",
    "closed_p10", "closed_p11", "max_abs_gap", "discrepancy", "p_odd"};

inline Axis axis(std::string key, double start, double stop, std::size_t steps,
                 bool integer = false) {
  return {std::move(key), start, stop, steps, integer, false};
}
inline Axis fixed(std::string key, double v, bool integer = false) {
  return axis(std::move(key), v, v, 1, integer);
}

}  // namespace detail

inline const std::vector<Experiment>& experiments() {
  using detail::axis;
  using detail::cat;
  using detail::fixed;
  using detail::kFamily;
  using detail::kParity;
  using detail::kTable;
  using std::numbers::pi;
  constexpr std::size_t kAngle = 64;
  static const std::vector<Experiment> all{
      {"mixed-bell",
       "two-qubit mixed entangled inputs: P(not 00) and odd parity against half the impurity",
       {axis("c2", 0, 1, 4), axis("delta", 0, pi / 4, kAngle)},
       {},
       cat({kParity,
            {"p_not_all_zero", "purity", "half_one_minus_purity", "closed_p00", "closed_p_odd",
             "closed_p11", "closed_purity", "circuit_max_abs_diff"}}),
       false,
       detail::mixed_bell},
      {"mixed-ghz", "mixed and inequivalent GHZ inputs against the closed forms",
       {axis("n", 3, 3, 1, true), axis("delta", 0, pi / 4, kAngle),
        axis("epsilon", 0, pi / 4, kAngle)},
       {},
       cat({kFamily, {"fidelity", "closed_fidelity", "purity", "closed_purity"}}),
       false,
       detail::mixed_ghz},
      {"mixed-w", "mixed and inequivalent W inputs against the closed forms",
       {axis("n", 3, 3, 1, true), axis("delta", 0, pi / 4, kAngle),
        axis("epsilon", 0, pi / 4, kAngle)},
       {"w_variant"},
       cat({kFamily, {"fidelity", "purity", "purity_approx", "closed_discrepancy"}}),
       false,
       detail::mixed_w},
      {"qudit-seesaw", "qudit GHZ-like inputs with a seesaw imbalance, including the X factor",
       {axis("D", 2, 8, 7, true), axis("n", 2, 3, 2, true), axis("delta", 0, pi / 4, kAngle)},
       {},
       cat({kFamily,
            {"x_factor", "exact_all_zero", "exact_even_nonzero", "exact_odd",
             "max_abs_gap_exact", "fidelity", "fidelity_cos2"}}),
       false,
       detail::qudit_seesaw},
      {"qudit-vs-qubit", "two-qudit P(11) against qubit GHZ concentratable entanglement",
       {axis("D", 2, 32, 31, true)},
       {},
       {"p11_qudit", "p11_limit", "qubit_n", "ce_qubit_ghz", "abs_diff"},
       false,
       detail::qudit_vs_qubit},
      {"bipartite-tables", "bipartite test on the double pair state for every cut",
       {axis("delta", 0, pi / 4, 9)},
       {"cut", "bit_order"},
       cat({{"concurrence", "c2_squared"},
            kTable,
            {"oracle_p00", "oracle_p01", "oracle_p10", "oracle_p11", "max_abs_gap_oracle"}}),
       false,
       detail::bipartite_tables},
      {"two-party-tables", "two-party tests on chi_4 and the double pair state",
       {},
       {"state", "pair", "bit_order"},
       cat({{"failure_flag"}, kTable}),
       false,
       detail::two_party_tables},
      {"haar-comparison", "general test against summed bipartite tests on Haar-random states",
       {axis("n", 3, 4, 2, true), axis("sample", 0, 999, 1000, true)},
       {},
       {"ce", "ce_purities", "p_odd", "parity_ok", "cuts", "sum_cut_p11", "mean_cut_p11",
        "max_cut_p_odd", "general_equal_copies", "general_geq_summed"},
       true,
       detail::haar_comparison},
      {"squeezed-equiv", "equivalence test of a coherent state against its squeezed version",
       {axis("alpha", 0, 2, 5), axis("r", 0, 1.5, 31), fixed("theta", 0),
        fixed("d_cut", 80, true)},
       {},
       {"numeric_p1", "analytic_p1", "abs_err", "deficit"},
       false,
       detail::squeezed_equiv},
      {"squeezed-cat", "equivalence test of cat states against squeezed cats",
       {axis("alpha", 0.5, 2, 4), axis("r", 0, 4, 41), fixed("phi1", 0),
        fixed("d_cut", 80, true), {"phi", 0, 2 * pi, 17, false, true}},
       {},
       {"numeric_region", "analytic_p1", "analytic_p1_full_angle", "numeric_p1", "abs_err",
        "deficit"},
       false,
       detail::squeezed_cat},
      {"ecs-general", "entangled coherent states with a prescribed concurrence analogue",
       {axis("c2prime", 0.25, 1, 4), axis("alpha", 0, 3, 61), fixed("d_cut", 40, true)},
       {},
       cat({{"defined", "a_pp", "a_pm", "a_mp", "a_mm", "c2prime_check", "concurrence",
             "deficit"},
            kParity}),
       false,
       detail::ecs_general},
      {"ecvs-vs-ecsplus", "entangled coherent vacuum state against the ECS+ state",
       {axis("alpha", 0, 3, 61), fixed("d_cut", 40, true)},
       {"state"},
       cat({{"p11", "oracle_p11", "abs_err_oracle", "closed_p11", "deficit"}, kParity}),
       false,
       detail::ecvs_vs_ecsplus},
      {"ecs-qudit", "finite-dimensional ECS approximation: norm and P(11)",
       {axis("D", 2, 20, 19, true), axis("alpha", 0, 3, 61)},
       {},
       cat({{"norm_raw", "norm_exact", "norm_relative", "deficit", "p11_qudit", "p11_ecs"},
            kParity}),
       false,
       detail::ecs_qudit},
      {"tmsv", "two-mode squeezed vacuum truncated to D levels",
       {axis("D", 10, 250, 25, true), axis("r", 0, 6, 61)},
       {},
       cat({{"norm2", "deficit", "p11", "double_sum", "abs_diff_double_sum", "rescaled",
             "abs_diff_rescaled", "limit"},
            kParity}),
       false,
       detail::tmsv},
  };
  return all;
}

inline const Experiment& find_experiment(std::string_view id) {
  for (const auto& e : experiments()) {
    if (e.id == id) return e;
  }
  throw UsageError("unknown experiment '" + std::string(id) + "'");
}

inline const std::vector<std::string>& sweep_families() {
  static const std::vector<std::string> f{"ghz", "w", "seesaw", "phi-plus-plus"};
  return f;
}

/// A state family under the full entanglement test ("full") or the
/// equivalence test ("equivalence"); inputs are twin copies except for
/// seesaw, which compares delta against 0.
inline Experiment sweep_experiment(std::string_view family, std::string_view test) {
  if (test != "full" && test != "equivalence") {
    throw UsageError("sweep: test must be full or equivalence");
  }
  const bool full = test == "full";
  using detail::axis;
  using std::numbers::pi;
  Experiment e;
  e.id = "sweep-" + std::string(family) + "-" + std::string(test);
  e.outputs = detail::cat({detail::kParity, {"ce"}});
  if (family == "ghz" || family == "w") {
    const bool g = family == "ghz";
    e.description = g ? "GHZ states" : "W states";
    e.axes = {axis("n", g ? 2 : 3, 6, g ? 5 : 4, true)};
    e.eval = [g, full](const Point& p, const Context&) {
      const std::size_t n = p.size("n");
      if (n < (g ? 2u : 3u) || n > 12) throw UsageError("sweep: n out of range");
      const auto s = g ? qstates::ghz(n) : qstates::w(n);
      return detail::sweep_row(s, s, full);
    };
  } else if (family == "seesaw") {
    e.description = "seesaw qudit states";
    e.axes = {axis("D", 2, 4, 3, true), axis("n", 2, 2, 1, true),
              axis("delta", 0, pi / 4, 9)};
    e.eval = [full](const Point& p, const Context&) {
      const std::size_t D = p.size("D"), n = p.size("n");
      if (std::pow(double(D), double(n)) > double(1u << 20)) {
        throw UsageError("sweep: D^n too large");
      }
      return detail::sweep_row(qstates::seesaw_qudit(D, n, 0),
                               qstates::seesaw_qudit(D, n, p["delta"]), full);
    };
  } else if (family == "phi-plus-plus") {
    e.description = "double pair state";
    e.axes = {axis("delta", 0, pi / 4, 9)};
    e.eval = [full](const Point& p, const Context&) {
      const auto s = qstates::phi_plus_plus_4(p["delta"]);
      return detail::sweep_row(s, s, full);
    };
  } else {
    throw UsageError("unknown sweep family '" + std::string(family) + "'");
  }
  return e;
}

// ---------------------------------------------------------------------------
// running

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const {
    csv::Writer w(os, columns);
    for (const auto& r : rows) w.row(r);
  }
};

/// Axes after overrides; an override for an unknown key is a usage error.
inline std::vector<Axis> apply_overrides(const Experiment& e, const std::vector<Axis>& overrides) {
  auto axes = e.axes;
  for (const auto& o : overrides) {
    const auto it = std::find_if(axes.begin(), axes.end(),
                                 [&](const Axis& a) { return a.key == o.key; });
    if (it == axes.end()) {
      throw UsageError("experiment " + e.id + " has no parameter '" + o.key + "'");
    }
    if (it->integer && (o.start != std::round(o.start) || o.stop != std::round(o.stop))) {
      throw UsageError("parameter '" + o.key + "' takes integers");
    }
    it->start = o.start;
    it->stop = o.stop;
    it->steps = o.steps;
  }
  return axes;
}

/// Cross product of the outer axes, first axis slowest.
inline std::vector<Point> expand(const std::vector<Axis>& axes) {
  std::vector<Point> pts(1);
  for (const auto& a : axes) {
    const auto vals = a.values();
    if (a.inner) {
      for (auto& p : pts) p.inner[a.key] = vals;
      continue;
    }
    std::vector<Point> next;
    next.reserve(pts.size() * vals.size());
    for (const auto& p : pts) {
      for (double v : vals) {
        next.push_back(p);
        next.back().value[a.key] = v;
      }
    }
    pts = std::move(next);
  }
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i].index = i;
  return pts;
}

inline std::size_t workers_from_env(std::size_t fallback = 1) {
  const char* v = std::getenv("CSWAP_LAB_WORKERS");
  if (!v || !*v) return fallback;
  std::size_t n = 0;
  const auto* end = v + std::strlen(v);
  const auto r = std::from_chars(v, end, n);
  if (r.ec != std::errc() || r.ptr != end || n == 0) {
    throw UsageError("CSWAP_LAB_WORKERS must be a positive integer");
  }
  return n;
}

/// Runs f(i) for i < count on up to `workers` threads. Errors are collected
/// per index; the lowest failing index is rethrown.
template <class F>
void parallel_for(std::size_t count, std::size_t workers, F&& f) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace detail {

inline std::string describe(const Point& p) {
  std::string s;
  for (const auto& [k, v] : p.value) s += (s.empty() ? "" : ", ") + k + "=" + csv::format(v);
  return s.empty() ? "(single point)" : s;
}

}  // namespace detail

/// Evaluates every grid point; rows come back in grid order.
inline std::vector<std::pair<Point, std::vector<Row>>> evaluate(
    const Experiment& e, const Context& ctx, const std::vector<Axis>& overrides,
    std::size_t workers) {
  const auto points = expand(apply_overrides(e, overrides));
  std::vector<std::vector<Row>> out(points.size());
  parallel_for(points.size(), workers, [&](std::size_t i) {
    try {
      out[i] = e.eval(points[i], ctx);
    } catch (const std::invalid_argument& x) {
      throw GridPointError(e.id + " at " + detail::describe(points[i]) + ": " + x.what(), true);
    } catch (const std::exception& x) {
      throw GridPointError(e.id + " at " + detail::describe(points[i]) + ": " + x.what(), false);
    }
  });
  std::vector<std::pair<Point, std::vector<Row>>> res;
  res.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) res.emplace_back(points[i], std::move(out[i]));
  return res;
}

/// Seed of the shot stream for row `row` of grid point `point`.
inline std::uint64_t shot_seed(std::uint64_t seed, std::size_t point, std::size_t row) {
  return derive_seed(derive_seed(seed, point), row);
}

namespace detail {

inline std::vector<std::string> prefix(const Experiment& e, const Context& ctx, const Point& p,
                                       const Row& r) {
  std::vector<std::string> cells{e.id, std::to_string(csv::kSchemaVersion),
                                 std::to_string(ctx.seed)};
  for (const auto& a : e.axes) {
    if (a.inner) {
      const auto it = r.cells().find(a.key);
      cells.push_back(it == r.cells().end() ? "" : it->second);
    } else {
      cells.push_back(a.integer ? csv::format(std::uint64_t(p[a.key])) : csv::format(p[a.key]));
    }
  }
  for (const auto& l : e.labels) {
    const auto it = r.cells().find(l);
    cells.push_back(it == r.cells().end() ? "" : it->second);
  }
  return cells;
}

inline void check_keys(const Experiment& e, const Row& r) {
  for (const auto& [k, v] : r.cells()) {
    const auto known = [&](const std::vector<std::string>& c) {
      return std::find(c.begin(), c.end(), k) != c.end();
    };
    const bool axis_key = std::any_of(e.axes.begin(), e.axes.end(),
                                      [&](const Axis& a) { return a.key == k && a.inner; });
    if (!known(e.outputs) && !known(e.labels) && !axis_key) {
      throw std::logic_error(e.id + ": undeclared column " + k);
    }
  }
}

}  // namespace detail

/// Wide CSV table: experiment_id, schema_version, seed, parameters, outputs,
/// then shot columns when ctx.shots > 0.
inline Table run(const Experiment& e, const Context& ctx, const std::vector<Axis>& overrides = {},
                 std::size_t workers = 1) {
  Table t;
  t.columns = {"experiment_id", "schema_version", "seed"};
  const auto params = e.parameter_columns();
  t.columns.insert(t.columns.end(), params.begin(), params.end());
  t.columns.insert(t.columns.end(), e.outputs.begin(), e.outputs.end());
  if (ctx.shots) t.columns.insert(t.columns.end(), shot_columns().begin(), shot_columns().end());
  for (const auto& [p, rows] : evaluate(e, ctx, overrides, workers)) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& r = rows[k];
      detail::check_keys(e, r);
      auto cells = detail::prefix(e, ctx, p, r);
      for (const auto& o : e.outputs) {
        const auto it = r.cells().find(o);
        cells.push_back(it == r.cells().end() ? "" : it->second);
      }
      if (ctx.shots) {
        if (r.dist()) {
          const auto seed = shot_seed(ctx.seed, p.index, k);
          const auto rec = shots::sample(*r.dist(), ctx.shots, seed);
          const double n = double(ctx.shots);
          std::uint64_t odd = 0;
          for (std::size_t z = 0; z < rec.counts.size(); ++z) {
            if (std::popcount(z) % 2) odd += rec.counts[z];
          }
          const auto ci = shots::wilson(odd, ctx.shots);
          for (auto v : {csv::format(ctx.shots), csv::format(seed),
                         csv::format(double(rec.counts.front()) / n),
                         csv::format(double(odd) / n), csv::format(double(rec.counts.back()) / n),
                         csv::format(ci.lo), csv::format(ci.hi)}) {
            cells.push_back(v);
          }
        } else {
          cells.insert(cells.end(), shot_columns().size(), "");
        }
      }
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

/// Long format: one line per (row, outcome) with counts and Wilson intervals.
inline Table sample_long(const Experiment& e, const Context& ctx,
                         const std::vector<Axis>& overrides = {}, std::size_t workers = 1) {
  if (ctx.shots == 0) throw UsageError("sample: --shots must be positive");
  Table t;
  t.columns = {"experiment_id", "schema_version", "seed"};
  const auto params = e.parameter_columns();
  t.columns.insert(t.columns.end(), params.begin(), params.end());
  const bool order_label =
      std::find(e.labels.begin(), e.labels.end(), "bit_order") != e.labels.end();
  t.columns.push_back("row");
  if (!order_label) t.columns.push_back("bit_order");
  for (const char* c : {"outcome", "exact_p", "shots", "shot_seed", "count", "frequency",
                        "ci95_lo", "ci95_hi"}) {
    t.columns.push_back(c);
  }
  for (const auto& [p, rows] : evaluate(e, ctx, overrides, workers)) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& r = rows[k];
      if (!r.dist()) continue;
      const auto d = r.dist()->with_bit_order(ctx.bit_order);
      const auto seed = shot_seed(ctx.seed, p.index, k);
      const auto rec = shots::sample(d, ctx.shots, seed);
      const auto est = shots::estimate(rec);
      // outcomes in lexicographic bitstring order
      for (std::uint32_t i = 0; i < est.size(); ++i) {
        std::string bits(d.m(), '0');
        for (std::size_t b = 0; b < d.m(); ++b) {
          if (i >> (d.m() - 1 - b) & 1u) bits[b] = '1';
        }
        const auto& x = est[d.mask_of(bits)];
        auto cells = detail::prefix(e, ctx, p, r);
        cells.push_back(csv::format(std::uint64_t{k}));
        if (!order_label) cells.push_back(to_string(ctx.bit_order));
        for (auto v : {bits, csv::format(d.at_mask(x.mask)),
                       csv::format(ctx.shots), csv::format(seed),
                       csv::format(rec.counts[x.mask]), csv::format(x.point),
                       csv::format(x.ci95.lo), csv::format(x.ci95.hi)}) {
          cells.push_back(v);
        }
        t.rows.push_back(std::move(cells));
      }
    }
  }
  return t;
}

}  // namespace cswap::lab
