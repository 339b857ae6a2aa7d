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

/// Concentratable entanglement, the class ratio R and the tolerance rule
/// that discards inputs whose odd-parity rate is too high.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "cswap/hilbert.hpp"
#include "cswap/swaptest.hpp"

namespace cswap::measures {

/// 1 - P(all zero).
inline double concentratable_from_distribution(const ControlDistribution& dist) {
  return 1.0 - dist.all_zero();
}

/// 1 - 2^-n sum over all site subsets of the marginal purity (empty set
/// counts as 1).
inline double concentratable_from_purities(const PureState& psi) {
  const std::size_t n = psi.layout().size();
  if (n > 24) throw std::invalid_argument("concentratable_from_purities: too many sites");
  double sum = 1.0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    SiteList s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) s.push_back(i);
    }
    sum += detail::marginal_overlap(psi, psi, s);
  }
  return 1.0 - sum / double(std::uint64_t{1} << n);
}

enum class EntanglementClass { GHZ, W, Custom };

inline const char* to_string(EntanglementClass c) {
  switch (c) {
    case EntanglementClass::GHZ: return "GHZ";
    case EntanglementClass::W: return "W";
    default: return "custom";
  }
}

/// Fallback ratio for classes without a known value.
inline constexpr double kHeuristicRatio = 0.5;

inline double ratio_R(EntanglementClass c, std::size_t n) {
  switch (c) {
    case EntanglementClass::GHZ: return 2.0 / std::ldexp(1.0, static_cast<int>(n));
    case EntanglementClass::W: return 0.5;
    default: return kHeuristicRatio;
  }
}

/// (CE - CE_pure) / P(odd).
inline double ratio_R_empirical(double ce_err, double p_odd) {
  if (p_odd == 0.0) throw std::domain_error("ratio_R_empirical: P(odd) is zero");
  return ce_err / p_odd;
}

struct ToleranceConfig {
  double T;
  double r_class;
  EntanglementClass label = EntanglementClass::Custom;
  bool heuristic_ratio = false;

  ToleranceConfig(double t, double r, EntanglementClass l = EntanglementClass::Custom)
      : T(t), r_class(r), label(l) {
    if (!(T > 0.0 && T <= 1.0)) throw std::invalid_argument("ToleranceConfig: T outside (0,1]");
    if (!(r_class > 0.0)) throw std::invalid_argument("ToleranceConfig: R <= 0");
  }

  static ToleranceConfig for_class(EntanglementClass c, std::size_t n, double t) {
    ToleranceConfig cfg(t, ratio_R(c, n), c);
    cfg.heuristic_ratio = c == EntanglementClass::Custom;
    return cfg;
  }
};

struct ToleranceVerdict {
  double p_odd;
  double bound;
  bool violated;
  double expected_repeats_to_violation;
};

/// bound = CE / R * T; violated iff P(odd) > bound.
inline ToleranceVerdict tolerance_check(double p_odd, double ce_estimate,
                                        const ToleranceConfig& config) {
  if (ce_estimate < 0) throw std::invalid_argument("tolerance_check: CE < 0");
  const double bound = ce_estimate / config.r_class * config.T;
  const double repeats =
      bound > 0 ? 1.0 / bound : std::numeric_limits<double>::infinity();
  return {p_odd, bound, p_odd > bound, repeats};
}

inline ToleranceVerdict tolerance_check(const ControlDistribution& dist, double ce_estimate,
                                        const ToleranceConfig& config) {
  return tolerance_check(dist.odd(), ce_estimate, config);
}

/// CE - R P(odd), clamped to [0, 1].
inline double ce_error_correction(double ce_measured, double p_odd, double r_class) {
  return std::clamp(ce_measured - r_class * p_odd, 0.0, 1.0);
}

/// Class-agnostic two-control failure rule: P(odd) > 1/4. Values within
/// rounding of the threshold count as on it.
inline bool two_party_failure_flag(const ControlDistribution& dist) {
  if (dist.m() != 2) throw std::invalid_argument("two_party_failure_flag: m != 2");
  return dist.odd() > 0.25 + 1e-12;
}

}  // namespace cswap::measures
