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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cswap/qstates.hpp"
#include "cswap/shots.hpp"

using namespace cswap;
using namespace cswap::shots;
using Catch::Approx;

namespace {

DensityMatrix ghz3(double d) {
  return qstates::trace_environment(qstates::mixed_ghz_purified(3, d, 0));
}

}  // namespace

SCENARIO("sampling") {
  const ControlDistribution sure(2, {1, 0, 0, 0});
  const auto r = sample(sure, 1000, 3);
  CHECK(r.counts[0] == 1000);
  const auto b = qstates::bell(qstates::Bell::PhiPlus);
  const auto dist = full_entanglement_test(b, b);
  const auto big = sample(dist, 100000, kDefaultSeed);
  CHECK(std::accumulate(big.counts.begin(), big.counts.end(), std::uint64_t{0}) == 100000);
  CHECK(big.counts[1] == 0);
  CHECK(big.counts[2] == 0);
  CHECK(std::abs(double(big.counts[3]) / 1e5 - 0.25) < 3 * std::sqrt(0.25 * 0.75 / 1e5));
  CHECK(sample(dist, 500, 9).counts == sample(dist, 500, 9).counts);
  CHECK(sample(dist, 500, 9).counts != sample(dist, 500, 10).counts);
  CHECK_THROWS_AS(sample(dist, 0, 1), std::invalid_argument);
  THEN("the first draws are pinned") {
    const ControlDistribution u(2, {0.25, 0.25, 0.25, 0.25});
    const auto rec = sample(u, 64, kDefaultSeed);
    const auto again = sample(u, 64, kDefaultSeed);
    CHECK(rec.counts == again.counts);
    Rng rng(kDefaultSeed);
    std::vector<std::uint64_t> manual(4, 0);
    for (int k = 0; k < 64; ++k) ++manual[static_cast<std::size_t>(rng.uniform() * 4)];
    CHECK(rec.counts == manual);
  }
}

SCENARIO("frequencies converge") {
  qstates::HaarSampler s(3, 8);
  const auto a = s.next(), c = s.next();
  const auto dist = full_entanglement_test(a, c);
  const auto rec = sample(dist, 1000000, 4);
  for (std::size_t z = 0; z < 8; ++z) {
    CHECK(std::abs(double(rec.counts[z]) / 1e6 - dist.by_mask()[z]) < 5e-3);
  }
}

SCENARIO("Wilson intervals") {
  const auto zero = wilson(0, 100);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi == Approx(0.037).margin(1e-3));
  const auto q = wilson(25, 100);
  CHECK(q.lo < 0.25);
  CHECK(q.hi > 0.25);
  CHECK(q.lo == Approx(0.1754).margin(1e-4));
  CHECK(q.hi == Approx(0.3430).margin(1e-4));
  CHECK(wilson(100, 100).hi == 1.0);
  CHECK_THROWS_AS(wilson(0, 0), std::invalid_argument);
  THEN("the 95% interval covers the truth about 95% of the time") {
    const ControlDistribution d(2, {0.55, 0.2, 0.15, 0.1});
    int covered = 0, total = 0;
    for (std::uint64_t k = 0; k < 1000; ++k) {
      const auto est = estimate(sample(d, 400, 1000 + k));
      const auto& e = est[3];
      ++total;
      if (e.ci95.lo <= 0.1 && 0.1 <= e.ci95.hi) ++covered;
    }
    const double rate = double(covered) / total;
    CHECK(rate >= 0.93);
    CHECK(rate <= 0.97);
  }
  const auto est = estimate(sample(ControlDistribution(1, {0.5, 0.5}), 10, 1));
  CHECK(est[0].point + est[1].point == Approx(1.0));
}

SCENARIO("sequential monitor") {
  const auto cfg = measures::ToleranceConfig::for_class(measures::EntanglementClass::GHZ, 3, 0.01);
  SequentialMonitor mon(cfg, 3);
  for (int k = 0; k < 1000; ++k) mon.step(0);
  CHECK_FALSE(mon.violated());
  CHECK(mon.copies_used() == 2000);
  CHECK(mon.ancillas_used() == 3000);
  CHECK_THROWS_AS(mon.step(8), std::out_of_range);

  SequentialMonitor bad(cfg, 3);
  while (!bad.violated()) bad.step(1);
  CHECK_THROWS_AS(bad.step(0), std::logic_error);
  CHECK(monitor_step(mon, 3).steps() == mon.steps() + 1);

  WHEN("the inputs are mixed GHZ3 twins") {
    const auto d = ghz3(0.3);
    const auto dist = full_entanglement_test(d, d);
    std::vector<std::uint64_t> steps;
    for (std::uint64_t s = 0; s < 101; ++s) {
      const auto run = run_monitor(dist, cfg, 100000, s);
      CHECK(run.violated);
      steps.push_back(run.steps);
    }
    std::nth_element(steps.begin(), steps.begin() + 50, steps.end());
    CHECK(steps[50] < 200);
  }
  WHEN("the inputs are pure GHZ3 twins") {
    const auto g = qstates::ghz(3);
    const auto dist = full_entanglement_test(g, g);
    int violations = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const auto run = run_monitor(dist, cfg, 10000, s);
      violations += run.violated;
      CHECK(run.odd_rate == 0.0);
    }
    CHECK(violations <= 60);
  }
  WHEN("the odd rate sits exactly on the bound") {
    // One-sided 95%: about 5% of streams fire.
    const measures::ToleranceConfig c(0.25, 0.5);
    const ControlDistribution edge(2, {0.8, 0.05, 0.05, 0.1});
    const auto v = measures::tolerance_check(edge, 0.2, c);
    CHECK(v.bound == Approx(v.p_odd));
    int fired = 0;
    for (std::uint64_t s = 0; s < 400; ++s) fired += run_monitor(edge, c, 2000, s).violated;
    CHECK(fired < 80);
  }
}
