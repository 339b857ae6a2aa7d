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

/// Closed-form control probabilities for the state families in
/// qstates, kept verbatim so computed values can be compared against them.

#include <array>
#include <cmath>
#include <cstddef>

#include "cswap/swaptest.hpp"

namespace cswap::closed_form {

struct MixedBell {
  double p00, p_odd, p11, purity;
};

inline MixedBell mixed_bell(double theta, double delta) {
  const double s2t = std::sin(2 * theta) * std::sin(2 * theta);
  const double s2d = std::sin(2 * delta) * std::sin(2 * delta);
  const double c2t = std::cos(2 * theta) * std::cos(2 * theta);
  return {0.75 + 0.25 * c2t - s2d * s2t / 8, s2d * s2t / 4, s2t / 4 - s2d * s2t / 8,
          1.0 - 0.5 * s2t * s2d};
}

inline double pow2(std::size_t n) { return std::ldexp(1.0, static_cast<int>(n)); }

/// Mixed GHZ reference against its epsilon-tilted copy.
inline ParityTriple ghz_mixed(std::size_t n, double delta, double epsilon) {
  const double c = std::cos(2 * delta);
  const double x = 1.0 - c * c * std::cos(2 * epsilon);
  const double N = pow2(n);
  return {0.5 + 1.0 / N - x / (2 * N), 0.5 - 1.0 / N - (N / 2 - 1) / (2 * N) * x, x / 4};
}

inline double ghz_fidelity(double epsilon) { return std::cos(epsilon) * std::cos(epsilon); }
inline double ghz_purity(double delta) {
  return 1.0 - 0.5 * std::sin(2 * delta) * std::sin(2 * delta);
}

/// Mixed W reference against its epsilon-tilted copy.
inline ParityTriple w_mixed(std::size_t n, double delta, double epsilon) {
  const double y = 1.0 - std::cos(delta) * std::cos(delta) * std::cos(epsilon);
  const double k = double(n - 1) / (4.0 * double(n));
  return {0.5 + 0.5 / double(n) - k * y, 0.5 - 0.5 / double(n) - k * y, 2 * k * y};
}

inline double w_purity_approx(std::size_t n, double delta) {
  const double a = std::cos(double(n) * delta / double(n + 2));
  return a * a;
}

inline double seesaw_x(std::size_t D) { return D % 2 == 0 ? 1.0 : double(D - 1) / double(D); }

/// Seesaw reference (delta = 0) against the delta copy, closed form with
/// F = cos^2 delta and the parity factor X.
inline ParityTriple seesaw(std::size_t D, std::size_t n, double delta) {
  const double f = std::cos(delta) * std::cos(delta);
  const double x = seesaw_x(D);
  const double N = pow2(n);
  const double d = double(D);
  return {2.0 / d * (0.5 + (d - 1) / N) - x / N * (1 - f),
          4 * (0.5 - 1 / N) * (0.5 - 0.5 / d) - x * (0.5 - 1 / N) * (1 - f),
          x / 2 * (1 - f)};
}

/// Squared overlap of the delta = 0 and delta seesaw states.
inline double seesaw_fidelity(std::size_t D, double delta) {
  if (D % 2 == 0) return std::cos(delta) * std::cos(delta);
  const double d = double(D);
  const double a = ((d - 1) * std::cos(delta) + 1) / d;
  return a * a;
}

/// Same expressions with X = 1 and the actual overlap in place of cos^2.
inline ParityTriple seesaw_exact(std::size_t D, std::size_t n, double delta) {
  const double f = seesaw_fidelity(D, delta);
  const double N = pow2(n);
  const double d = double(D);
  return {2.0 / d * (0.5 + (d - 1) / N) - (1 - f) / N,
          4 * (0.5 - 1 / N) * (0.5 - 0.5 / d) - (0.5 - 1 / N) * (1 - f), (1 - f) / 2};
}

/// P(1111) for the GHZ+W mixtures at pi/4 and pi/4 + delta, n = 4.
inline double ghz_w_p1111(double delta) { return (1.0 - std::sin(2 * delta)) / 64.0; }

inline double two_qubit_bound(double c2, double purity, double T) {
  return 0.5 * (c2 * c2 + 1 - purity) * T;
}

inline double ghz_bound(std::size_t n, double fidelity, double purity, double T) {
  return 0.5 * (pow2(n - 1) - 1 + fidelity + purity - 2 * purity * fidelity) * T;
}

inline double ghz_expected_repeats(std::size_t n, double fidelity, double purity, double T) {
  return 2.0 / T / (pow2(n - 1) - 1 + fidelity + purity - 2 * purity * fidelity);
}

inline double w_bound(std::size_t n, double delta, double epsilon, double T) {
  return double(n - 1) / (2.0 * double(n)) *
         (3 - std::cos(delta) * std::cos(delta) * std::cos(epsilon)) * T;
}

inline double qudit_bound(std::size_t D, std::size_t n, double delta, double T) {
  const double d = double(D);
  return ((d - 1) / d * (pow2(n - 1) - 1) +
          seesaw_x(D) / 2 * (1 - std::cos(delta) * std::cos(delta))) * T;
}

/// Four control probabilities (00, 01, 10, 11) as functions of C^2.
using Column = std::array<double, 4>;

inline Column bipartite_12_34(double) { return {1, 0, 0, 0}; }
inline Column bipartite_13_24(double c2) { return {1 - 3 * c2 / 8, 0, 0, 3 * c2 / 8}; }
inline Column bipartite_3_124(double c2) {
  return {1 - c2 / 2, c2 / 8, c2 / 4, c2 / 8};
}

/// Pair columns for chi_4 and for the (C = 1) double pair state, in the order
/// (1,2), (1,3), (2,3), (3,4).
inline std::array<Column, 4> pairs_chi4() {
  return {{{1, 0, 0, 0}, {0.75, 0.25, 0, 0}, {0.75, 0.25, 0, 0}, {0.75, 0, 0, 0.25}}};
}
inline std::array<Column, 4> pairs_phi_plus_plus4() {
  return {{{0.75, 0, 0, 0.25},
           {9.0 / 16, 3.0 / 16, 3.0 / 16, 1.0 / 16},
           {9.0 / 16, 3.0 / 16, 3.0 / 16, 1.0 / 16},
           {0.75, 0, 0, 0.25}}};
}

}  // namespace cswap::closed_form
