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



#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cswap/csv.hpp"
#include "cswap/experiments.hpp"
#include "oracles.hpp"

using namespace cswap;
using namespace cswap::lab;
using Catch::Approx;

namespace {

std::string text(const Table& t) {
  std::ostringstream os;
  t.write(os);
  return os.str();
}

std::size_t col(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i] == name) return i;
  }
  FAIL("no column " << name);
  return 0;
}

double num(const Table& t, std::size_t row, const std::string& name) {
  return std::stod(t.rows.at(row).at(col(t, name)));
}

/// Every outer axis pinned to its first value, with a cheap cutoff where there is one.
std::vector<Axis> smallest(const Experiment& e) {
  std::vector<Axis> v;
  for (const auto& a : e.axes) {
    if (a.inner) continue;
    double x = a.start;
    if (a.key == "d_cut") x = 30;
    if (e.id == "squeezed-cat" && a.key == "r") x = 0.3;
    if (e.id == "ecs-general" && a.key == "alpha") x = 1.0;
    v.push_back(parse_grid_override(a.key + "=" + csv::format(x)));
  }
  return v;
}

}  // namespace

SCENARIO("csv formatting") {
  CHECK(csv::format(0.1) == "0.10000000000000001");
  CHECK(std::stod(csv::format(1.0 / 3)) == 1.0 / 3);
  CHECK(csv::format(1.0) == "1");
  CHECK(csv::format(std::uint64_t{18446744073709551615ULL}) == "18446744073709551615");
  CHECK(csv::quote("a,b") == "\"a,b\"");
  CHECK(csv::quote("say \"x\"") == "\"say \"\"x\"\"\"");
  CHECK(csv::split("a,\"b,c\",,\"d\"\"e\"") == std::vector<std::string>{"a", "b,c", "", "d\"e"});
  CHECK_THROWS_AS(csv::split("\"open"), std::invalid_argument);
  std::ostringstream os;
  csv::Writer w(os, {"x", "y"});
  w.row({"1", ""});
  CHECK(os.str() == "x,y\n1,\n");
  CHECK_THROWS_AS(w.row({"1"}), std::logic_error);
}

SCENARIO("grid overrides") {
  const auto a = parse_grid_override("delta=0:1:5");
  CHECK(a.key == "delta");
  CHECK(a.values() == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  const auto b = parse_grid_override("n=4");
  CHECK(b.values() == std::vector<double>{4});
  Axis i{"D", 2, 5, 3, true, false};
  CHECK(i.values() == std::vector<double>{2, 4, 5});
  for (const char* bad : {"delta", "=1", "delta=", "delta=1:2", "delta=0:1:0", "delta=0:1:2.5",
                          "delta=a:1:3", "delta=1:2:1", "delta=nan", "delta=1:2:3:4"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_grid_override(bad), UsageError);
  }
}

SCENARIO("grid expansion") {
  const std::vector<Axis> axes{{"a", 0, 1, 2, false, false},
                               {"p", 0, 1, 3, false, true},
                               {"b", 5, 7, 3, true, false}};
  const auto pts = expand(axes);
  REQUIRE(pts.size() == 6);
  CHECK(pts[0]["a"] == 0);
  CHECK(pts[2]["b"] == 7);
  CHECK(pts[3]["a"] == 1);
  CHECK(pts[3]["b"] == 5);
  CHECK(pts[5].index == 5);
  CHECK(pts[4].inner.at("p").size() == 3);
  CHECK(expand({}).size() == 1);
}

SCENARIO("registry") {
  std::set<std::string> ids;
  for (const auto& e : experiments()) {
    CAPTURE(e.id);
    CHECK(ids.insert(e.id).second);
    CHECK_FALSE(e.description.empty());
    std::set<std::string> cols{"experiment_id", "schema_version", "seed"};
    for (const auto& c : e.parameter_columns()) CHECK(cols.insert(c).second);
    for (const auto& c : e.outputs) CHECK(cols.insert(c).second);
    CHECK(&find_experiment(e.id) == &e);
  }
  CHECK(ids.size() == 14);
  CHECK_THROWS_AS(find_experiment("no-such"), UsageError);
}

SCENARIO("every experiment runs on a one-point grid") {
  for (const auto& e : experiments()) {
    CAPTURE(e.id);
    Context ctx;
    ctx.shots = 200;
    const auto t = run(e, ctx, smallest(e));
    REQUIRE_FALSE(t.rows.empty());
    CHECK(t.columns[0] == "experiment_id");
    CHECK(t.columns[1] == "schema_version");
    CHECK(t.columns[2] == "seed");
    CHECK(t.columns.back() == "emp_p_odd_hi");
    for (const auto& r : t.rows) {
      REQUIRE(r.size() == t.columns.size());
      CHECK(r[0] == e.id);
      CHECK(r[1] == "1");
      CHECK(r[2] == "202406");
    }
  }
}

SCENARIO("overrides and determinism") {
  const auto& bt = find_experiment("bipartite-tables");
  CHECK(text(run(bt, {}, {})) == text(run(bt, {}, {}, 3)));
  CHECK_THROWS_AS(run(bt, {}, {parse_grid_override("alpha=1")}), UsageError);
  CHECK_THROWS_AS(run(find_experiment("tmsv"), {}, {parse_grid_override("D=10.5")}), UsageError);

  const auto& h = find_experiment("haar-comparison");
  const std::vector<Axis> grid{parse_grid_override("sample=0:19:20")};
  Context c1;
  c1.shots = 1000;
  const auto one = text(run(h, c1, grid, 1));
  CHECK(one == text(run(h, c1, grid, 4)));
  Context c2 = c1;
  c2.seed = 7;
  CHECK(one != text(run(h, c2, grid, 1)));
}

SCENARIO("failures carry the grid point") {
  const auto& mb = find_experiment("mixed-bell");
  try {
    run(mb, {}, {parse_grid_override("c2=2"), parse_grid_override("delta=0.1")});
    FAIL("expected an error");
  } catch (const GridPointError& e) {
    CHECK(e.bad_parameters());
    CHECK(std::string(e.what()).find("c2=2") != std::string::npos);
  }
  CHECK_THROWS_AS(
      run(find_experiment("tmsv"), {}, {parse_grid_override("D=0"), parse_grid_override("r=1")}),
      GridPointError);
}

SCENARIO("mixed-bell at zero concurrence has no odd parity") {
  const auto t = run(find_experiment("mixed-bell"), {}, {parse_grid_override("c2=0")});
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(std::abs(num(t, i, "p_odd")) < 1e-12);
    CHECK(std::abs(num(t, i, "half_one_minus_purity")) < 1e-12);
  }
}

SCENARIO("bipartite tables carry the oracle and the discrepancy flag") {
  const auto t = run(find_experiment("bipartite-tables"), {});
  REQUIRE(t.rows.size() == 27);
  const auto cut = col(t, "cut"), flag = col(t, "discrepancy");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double c2 = num(t, i, "c2_squared");
    CHECK(num(t, i, "max_abs_gap_oracle") < 1e-12);
    if (t.rows[i][cut] == "12-34") CHECK(t.rows[i][flag] == "0");
    if (t.rows[i][cut] == "3-124") {
      CHECK(t.rows[i][flag] == (c2 > 1e-12 ? "1" : "0"));
      CHECK(num(t, i, "p11") == Approx(c2 / 4).margin(1e-12));
    }
  }
}

SCENARIO("bit order is applied to the table rows") {
  Context last;
  last.bit_order = BitOrder::GroupLast;
  const auto a = run(find_experiment("two-party-tables"), {});
  const auto b = run(find_experiment("two-party-tables"), last);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i][col(a, "p01")] == b.rows[i][col(b, "p10")]);
    CHECK(b.rows[i][col(b, "bit_order")] == "GROUP_LAST");
  }
}

SCENARIO("sweeps") {
  const auto t = run(sweep_experiment("ghz", "full"), {});
  REQUIRE(t.rows.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    const double n = num(t, i, "n");
    CHECK(num(t, i, "p_all_zero") == Approx(0.5 + std::pow(2.0, -n)).margin(1e-12));
  }
  const auto eq = run(sweep_experiment("seesaw", "equivalence"), {});
  CHECK(num(eq, 0, "p_all_zero") == Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(sweep_experiment("nope", "full"), UsageError);
  CHECK_THROWS_AS(sweep_experiment("ghz", "partial"), UsageError);
  Context c;
  c.shots = 10000;
  const auto s = run(sweep_experiment("w", "full"), c);
  CHECK(text(s) == text(run(sweep_experiment("w", "full"), c, {}, 2)));
}

SCENARIO("shot columns") {
  Context c;
  c.shots = 1'000'000;
  const auto t = run(find_experiment("mixed-bell"), c, {parse_grid_override("delta=0.4")});
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(std::abs(num(t, i, "emp_p_odd") - num(t, i, "p_odd")) < 5e-3);
    CHECK(std::abs(num(t, i, "emp_p_all_zero") - num(t, i, "p_all_zero")) < 5e-3);
    CHECK(num(t, i, "emp_p_odd_lo") <= num(t, i, "emp_p_odd"));
    CHECK(num(t, i, "emp_p_odd_hi") >= num(t, i, "emp_p_odd"));
    CHECK(t.rows[i][col(t, "shot_seed")] == std::to_string(shot_seed(c.seed, i, 0)));
  }
}

SCENARIO("long-format samples") {
  Context c;
  c.shots = 500;
  const auto t = sample_long(find_experiment("two-party-tables"), c);
  REQUIRE(t.rows.size() == 8 * 4);
  std::map<std::string, double> total;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    total[t.rows[i][col(t, "state")] + t.rows[i][col(t, "pair")]] += num(t, i, "count");
  }
  for (const auto& [k, v] : total) CHECK(v == 500);
  CHECK(t.rows[1][col(t, "outcome")] == "01");
  CHECK_THROWS_AS(sample_long(find_experiment("two-party-tables"), {}), UsageError);
}

SCENARIO("tmsv rows approach one half") {
  const auto t = run(find_experiment("tmsv"), {},
                     {parse_grid_override("D=250"), parse_grid_override("r=0:6:7")});
  double last = -1;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double p = num(t, i, "p11");
    CHECK(p >= last);
    last = p;
    CHECK(num(t, i, "abs_diff_rescaled") < 1e-12);
  }
  CHECK(last == Approx(0.5 - 0.5 / 250).margin(1e-5));
}

SCENARIO("Haar rows") {
  const auto t = run(find_experiment("haar-comparison"), {},
                     {parse_grid_override("n=3"), parse_grid_override("sample=0:199:200")});
  double sum = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t.rows[i][col(t, "parity_ok")] == "1");
    CHECK(num(t, i, "ce") == Approx(num(t, i, "ce_purities")).margin(1e-12));
    CHECK(num(t, i, "cuts") == 3);
    sum += num(t, i, "ce");
  }
  // loose: 200 samples, spread ~0.1
  CHECK(sum / 200 == Approx(oracle::haar_mean_ce(3)).margin(0.03));
}

SCENARIO("worker pool") {
  std::vector<int> hit(100, 0);
  parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
  CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
  try {
    parallel_for(10, 3, [](std::size_t i) {
      if (i == 3 || i == 7) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "3");
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}
