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

/// Invariant and golden-value checks behind `cswap-lab validate`.

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cswap/cswap.hpp"
#include "cswap/experiments.hpp"

namespace cswap::lab::validation {

struct Outcome {
  std::string name;
  bool pass;
  std::string detail;
};

/// Golden file: {"schema_version": 1, "checks": {name: {"value": v, "tol": t}}}.
struct Golden {
  std::map<std::string, std::pair<double, double>> checks;

  static Golden load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("validate: cannot open golden file " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("validate: golden file is not JSON: " + std::string(e.what()));
    }
    if (j.value("schema_version", 0) != csv::kSchemaVersion || !j.contains("checks")) {
      throw UsageError("validate: golden file has the wrong schema");
    }
    Golden g;
    for (const auto& [k, v] : j.at("checks").items()) {
      g.checks[k] = {v.at("value").get<double>(), v.at("tol").get<double>()};
    }
    return g;
  }
};

namespace detail {

inline double max_diff(const ControlDistribution& a, const ControlDistribution& b) {
  double m = 0;
  for (std::size_t z = 0; z < a.by_mask().size(); ++z) {
    m = std::max(m, std::abs(a.by_mask()[z] - b.by_mask()[z]));
  }
  return m;
}

inline std::string csv_text(const Table& t) {
  std::ostringstream os;
  t.write(os);
  return os.str();
}

}  // namespace detail

/// Named scalar values compared against the golden file.
inline std::map<std::string, std::function<double()>> golden_values() {
  using std::numbers::pi;
  return {
      {"ghz3.p_all_zero",
       [] {
         const auto g = qstates::ghz(3);
         return full_entanglement_test(g, g).all_zero();
       }},
      {"w3.ce",
       [] {
         const auto w = qstates::w(3);
         return measures::concentratable_from_distribution(full_entanglement_test(w, w));
       }},
      {"bell.p11",
       [] {
         const auto b = qstates::bell(qstates::Bell::PhiPlus);
         return full_entanglement_test(b, b).all_one();
       }},
      {"bipartite.13-24.p11",
       [] {
         const auto s = qstates::phi_plus_plus_4(0);
         return bipartite_test(s, s, {0, 2}).all_one();
       }},
      {"bipartite.3-124.p11",
       [] {
         const auto s = qstates::phi_plus_plus_4(0);
         return bipartite_test(s, s, {2}).all_one();
       }},
      {"two-party.chi4.1-3.p01",
       [] {
         const auto s = qstates::chi_4(PureState::basis(SiteLayout::qubits(2), 0));
         return two_party_test(s, s, 0, 2).prob("01");
       }},
      {"two-party.phi_plus_plus4.1-3.p00",
       [] {
         const auto s = qstates::phi_plus_plus_4(0);
         return two_party_test(s, s, 0, 2).prob("00");
       }},
      {"ghz-w.p1111.delta0.2",
       [] {
         const auto a = qstates::ghz_w_mixture(4, pi / 4);
         const auto b = qstates::ghz_w_mixture(4, pi / 4 + 0.2);
         return full_entanglement_test(a, b).all_one();
       }},
      {"seesaw.D3.n2.delta0.3.p_odd",
       [] {
         return full_entanglement_test(qstates::seesaw_qudit(3, 2, 0),
                                       qstates::seesaw_qudit(3, 2, 0.3))
             .odd();
       }},
      {"squeezed-equiv.alpha0.7.r1.p1",
       [] { return squeezed_coherent_equivalence(0.7, 1.0, 0.0, 80).numeric_p1; }},
      {"tmsv.D250.r6.p11",
       [] {
         const auto s = optical::tmsv_qudit(6.0, 0.0, 250, 1.0);
         return full_entanglement_test(s.state, s.state).all_one();
       }},
      {"ecs-plus.alpha1.p11",
       [] {
         const auto s = optical::ecs_plus(1.0, 40);
         return full_entanglement_test(s.state, s.state).all_one();
       }},
  };
}

/// Checks that need no golden value.
inline std::vector<Outcome> invariants() {
  std::vector<Outcome> out;
  auto add = [&](std::string name, bool pass, std::string detail = {}) {
    out.push_back({std::move(name), pass, std::move(detail)});
  };
  // engine agreement
  {
    const auto g = qstates::ghz(3), w = qstates::w(3);
    const double d1 = detail::max_diff(full_entanglement_test(g, w),
                                       full_entanglement_test(g, w, Engine::Circuit));
    add("engines.ghz3-w3", d1 < 1e-10, "max diff " + csv::format(d1));
    const auto m = qstates::trace_environment(qstates::mixed_bell_purified(0.4, 0.2));
    const double d2 = detail::max_diff(full_entanglement_test(m, m),
                                       full_entanglement_test(m, m, Engine::Circuit));
    add("engines.mixed-bell", d2 < 1e-10, "max diff " + csv::format(d2));
  }
  // parity: twin pure inputs never give odd parity
  {
    qstates::HaarSampler hs(4, kDefaultSeed, 7);
    double worst = 0;
    for (int k = 0; k < 20; ++k) {
      const auto s = hs.next();
      worst = std::max(worst, full_entanglement_test(s, s).odd());
    }
    add("parity.twin-pure", worst < 1e-12, "max P(odd) " + csv::format(worst));
  }
  // bit order: the 3-124 oracle column and the chi4 1-3 pair flip with the order
  {
    const auto s = qstates::chi_4(PureState::basis(SiteLayout::qubits(2), 0));
    const auto a = two_party_test(s, s, 0, 2, Engine::Expectation, BitOrder::GroupFirst);
    const auto b = two_party_test(s, s, 0, 2, Engine::Expectation, BitOrder::GroupLast);
    add("bit-order.mirror", std::abs(a.prob("01") - b.prob("10")) < 1e-15);
  }
  // determinism across worker counts
  {
    const auto& e = find_experiment("haar-comparison");
    Context ctx;
    ctx.shots = 100;
    const std::vector<Axis> grid{parse_grid_override("sample=0:49:50")};
    const bool same = detail::csv_text(run(e, ctx, grid, 1)) == detail::csv_text(run(e, ctx, grid, 4));
    add("determinism.workers", same);
  }
  return out;
}

/// Runs every check; the golden file must list exactly the named values.
inline std::vector<Outcome> validate(const Golden& golden) {
  auto out = invariants();
  const auto values = golden_values();
  for (const auto& [name, f] : values) {
    const auto it = golden.checks.find(name);
    if (it == golden.checks.end()) {
      out.push_back({"golden." + name, false, "missing from golden file"});
      continue;
    }
    const double got = f();
    const auto [want, tol] = it->second;
    const bool pass = std::abs(got - want) <= tol;
    out.push_back({"golden." + name, pass,
                   "got " + csv::format(got) + " expected " + csv::format(want) + " tol " +
                       csv::format(tol)});
  }
  for (const auto& [name, v] : golden.checks) {
    if (!values.count(name)) out.push_back({"golden." + name, false, "unknown check"});
  }
  return out;
}

}  // namespace cswap::lab::validation
