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

/// Finite-shot sampling of control distributions, Wilson intervals and the
/// sequential tolerance monitor.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cswap/measures.hpp"
#include "cswap/rng.hpp"
#include "cswap/swaptest.hpp"

namespace cswap::shots {

inline constexpr double kZ95 = 1.959963984540054;        // two-sided 95%
inline constexpr double kZ95OneSided = 1.6448536269514722;

struct ShotRecord {
  std::size_t m;
  std::vector<std::uint64_t> counts;  // by group mask
  std::uint64_t n_shots;
  std::uint64_t seed;
  BitOrder bit_order = BitOrder::GroupFirst;
};

namespace detail {

/// Inverse-CDF draws over group masks, one uniform per outcome.
class OutcomeSampler {
 public:
  OutcomeSampler(const ControlDistribution& dist, std::uint64_t seed) : rng_(seed) {
    const auto& p = dist.by_mask();
    cdf_.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      cdf_[i] = (total_ += p[i]);
      // the largest outcome with nonzero probability absorbs rounding at the top
      if (p[i] > 0) last_ = i;
    }
  }

  std::uint32_t next() {
    const double u = rng_.uniform() * total_;
    const auto k = static_cast<std::size_t>(
        std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    return static_cast<std::uint32_t>(std::min(k, last_));
  }

 private:
  Rng rng_;
  std::vector<double> cdf_;
  double total_ = 0.0;
  std::size_t last_ = 0;
};

}  // namespace detail

/// Multinomial draw.
inline ShotRecord sample(const ControlDistribution& dist, std::uint64_t n_shots,
                         std::uint64_t seed) {
  if (n_shots == 0) throw std::invalid_argument("sample: n_shots == 0");
  ShotRecord rec{dist.m(), std::vector<std::uint64_t>(dist.by_mask().size(), 0), n_shots,
                 seed, dist.bit_order()};
  detail::OutcomeSampler draw(dist, seed);
  for (std::uint64_t s = 0; s < n_shots; ++s) ++rec.counts[draw.next()];
  return rec;
}

struct Interval {
  double lo, hi;
};

inline Interval wilson(std::uint64_t k, std::uint64_t n, double z = kZ95) {
  if (n == 0) throw std::invalid_argument("wilson: n == 0");
  const double nn = double(n);
  const double p = double(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  return {k == 0 ? 0.0 : std::max(0.0, centre - half),
          k == n ? 1.0 : std::min(1.0, centre + half)};
}

struct Estimate {
  std::uint32_t mask;
  double point;
  Interval ci95;
};

inline std::vector<Estimate> estimate(const ShotRecord& rec) {
  if (rec.n_shots == 0) throw std::invalid_argument("estimate: n_shots == 0");
  std::vector<Estimate> out;
  out.reserve(rec.counts.size());
  for (std::size_t z = 0; z < rec.counts.size(); ++z) {
    out.push_back({static_cast<std::uint32_t>(z),
                   double(rec.counts[z]) / double(rec.n_shots),
                   wilson(rec.counts[z], rec.n_shots)});
  }
  return out;
}

/// Running CE and odd-parity estimates that flag a tolerance violation once
/// the one-sided 95% lower bound on P(odd) exceeds CE / R * T.
class SequentialMonitor {
 public:
  enum class Decision { Accepting, Violated };

  SequentialMonitor(measures::ToleranceConfig config, std::size_t m)
      : config_(config), m_(m) {
    if (m == 0) throw std::invalid_argument("SequentialMonitor: m == 0");
  }

  void step(std::uint32_t mask) {
    if (decision_ == Decision::Violated) {
      throw std::logic_error("SequentialMonitor: already violated");
    }
    if (mask >> m_) throw std::out_of_range("SequentialMonitor: outcome out of range");
    ++steps_;
    if (mask == 0) ++zero_;
    if (std::popcount(mask) % 2) ++odd_;
    if (odd_lower_bound() > bound()) decision_ = Decision::Violated;
  }

  Decision decision() const { return decision_; }
  bool violated() const { return decision_ == Decision::Violated; }
  std::uint64_t steps() const { return steps_; }
  std::uint64_t odd_count() const { return odd_; }
  double ce_estimate() const {
    return steps_ ? 1.0 - double(zero_) / double(steps_) : 0.0;
  }
  double odd_rate() const { return steps_ ? double(odd_) / double(steps_) : 0.0; }
  double bound() const { return ce_estimate() / config_.r_class * config_.T; }
  double odd_lower_bound() const {
    return steps_ ? wilson(odd_, steps_, kZ95OneSided).lo : 0.0;
  }
  std::uint64_t copies_used() const { return 2 * steps_; }
  std::uint64_t ancillas_used() const { return m_ * steps_; }
  const measures::ToleranceConfig& config() const { return config_; }

 private:
  measures::ToleranceConfig config_;
  std::size_t m_;
  std::uint64_t steps_ = 0, zero_ = 0, odd_ = 0;
  Decision decision_ = Decision::Accepting;
};

inline SequentialMonitor monitor_step(SequentialMonitor monitor, std::uint32_t mask) {
  monitor.step(mask);
  return monitor;
}

struct MonitorRun {
  bool violated;
  std::uint64_t steps;
  std::uint64_t copies;
  std::uint64_t ancillas;
  double ce_estimate;
  double odd_rate;
};

/// Feeds up to `max_steps` outcomes drawn from `dist` into a fresh monitor.
inline MonitorRun run_monitor(const ControlDistribution& dist,
                              const measures::ToleranceConfig& config,
                              std::uint64_t max_steps, std::uint64_t seed) {
  SequentialMonitor mon(config, dist.m());
  detail::OutcomeSampler draw(dist, seed);
  while (mon.steps() < max_steps && !mon.violated()) mon.step(draw.next());
  return {mon.violated(), mon.steps(), mon.copies_used(), mon.ancillas_used(),
          mon.ce_estimate(), mon.odd_rate()};
}

}  // namespace cswap::shots
