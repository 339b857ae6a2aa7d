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
#include <numbers>
#include <vector>

#include "cswap/qstates.hpp"
#include "oracles.hpp"

using namespace cswap;
using namespace cswap::qstates;
using Catch::Approx;
using std::numbers::pi;

namespace {

double system_purity(const PureState& purified) {
  return purity(trace_environment(purified));
}

}  // namespace

SCENARIO("Bell states") {
  const double h = 1 / std::sqrt(2.0);
  const auto pp = bell(Bell::PhiPlus);
  CHECK(pp.amplitude(0).real() == Approx(h));
  CHECK(pp.amplitude(3).real() == Approx(h));
  const auto pm = bell(Bell::PsiMinus);
  CHECK(pm.amplitude(1).real() == Approx(h));
  CHECK(pm.amplitude(2).real() == Approx(-h));
  CHECK(std::abs(inner_product(pp, bell(Bell::PhiMinus))) < 1e-15);
  for (auto b : {Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus}) {
    CHECK(concurrence_2q(bell(b)) == Approx(1.0));
  }
}

SCENARIO("GHZ and W states") {
  CHECK(fidelity_pure(ghz(2), bell(Bell::PhiPlus)) == Approx(1.0));
  CHECK(fidelity_pure(w(2), bell(Bell::PsiPlus)) == Approx(1.0));
  const auto w3 = w(3);
  const Matrix rho = w3.amplitudes() * w3.amplitudes().adjoint();
  for (std::size_t s = 0; s < 3; ++s) {
    const Matrix red = oracle::partial_trace(rho, {2, 2, 2}, {s});
    CHECK((red.adjoint() * red).trace().real() == Approx(5.0 / 9.0));
    CHECK(purity(partial_trace(w3, SiteList{s})) == Approx(5.0 / 9.0));
  }
  CHECK_THROWS_AS(ghz(1), std::invalid_argument);
  CHECK_THROWS_AS(w(1), std::invalid_argument);
  CHECK(std::abs(inner_product(ghz(4), w(4))) < 1e-15);
}

SCENARIO("mixed two-qubit purification") {
  CHECK(system_purity(mixed_bell_purified(0.3, 0.0)) == Approx(1.0).margin(1e-12));
  CHECK(system_purity(mixed_bell_purified(pi / 4, pi / 4)) == Approx(0.5).margin(1e-12));
  for (double d : {0.0, 0.3, 0.9, 1.4}) {
    CHECK(system_purity(mixed_bell_purified(0.0, d)) == Approx(1.0).margin(1e-12));
  }
  THEN("the purity matches 1 - C^2 sin^2(2 delta) / 2 across a grid") {
    for (double t = -0.7; t <= 0.8; t += 0.25) {
      for (double d = 0.0; d <= 0.8; d += 0.2) {
        const double c = std::abs(std::sin(2 * t));
        const double expect = 1 - 0.5 * c * c * std::sin(2 * d) * std::sin(2 * d);
        CHECK(system_purity(mixed_bell_purified(t, d)) == Approx(expect).margin(1e-12));
      }
    }
  }
  THEN("the delta = 0 system is the tilted Bell-like state with concurrence |sin 2 theta|") {
    const auto sys = trace_environment(mixed_bell_purified(0.2, 0.0));
    Eigen::SelfAdjointEigenSolver<Matrix> es(sys.matrix());
    const Vector top = es.eigenvectors().col(3);
    const PureState psi(SiteLayout::qubits(2), top);
    CHECK(concurrence_2q(psi) == Approx(std::abs(std::sin(0.4))).epsilon(1e-12));
  }
}

SCENARIO("mixed GHZ purification") {
  for (std::size_t n : {2u, 3u, 5u}) {
    const auto sys = trace_environment(mixed_ghz_purified(n, 0, 0));
    const Matrix g = ghz(n).amplitudes() * ghz(n).amplitudes().adjoint();
    CHECK((sys.matrix() - g).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(system_purity(mixed_ghz_purified(n, pi / 4, 0)) == Approx(0.5).margin(1e-12));
  }
  for (double e : {0.05, 0.3, 0.7}) {
    CHECK(fidelity_pure(mixed_ghz_purified(3, 0.2, 0), mixed_ghz_purified(3, 0.2, e)) ==
          Approx(std::cos(e) * std::cos(e)).margin(1e-12));
  }
  THEN("system purity stays in [1/2, 1] and matches its closed form at epsilon = 0") {
    for (double d = 0; d <= pi / 4 + 1e-9; d += pi / 32) {
      for (double e = 0; e <= pi / 4 + 1e-9; e += pi / 16) {
        const double g = system_purity(mixed_ghz_purified(4, d, e));
        CHECK(g >= 0.5 - 1e-12);
        CHECK(g <= 1 + 1e-12);
      }
      CHECK(system_purity(mixed_ghz_purified(4, d, 0)) ==
            Approx(1 - 0.5 * std::sin(2 * d) * std::sin(2 * d)).margin(1e-10));
    }
  }
  CHECK_THROWS_AS(mixed_ghz_purified(1, 0, 0), std::invalid_argument);
}

SCENARIO("mixed W purification") {
  for (std::size_t n : {3u, 4u, 5u}) {
    const auto p = mixed_w_purified(n, 0, 0);
    CHECK(p.layout().dim(0) == std::size_t{1} << (n - 1));
    const auto sys = trace_environment(p);
    const Matrix wm = w(n).amplitudes() * w(n).amplitudes().adjoint();
    CHECK((sys.matrix() - wm).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(purity(sys) == Approx(1.0).margin(1e-10));
  }
  THEN("the literal amplitudes are normalized without rescaling") {
    // Rebuild the amplitude norm independently: all branches squared.
    for (std::size_t n : {3u, 4u, 6u}) {
      for (double d : {0.0, 0.3}) {
        for (double e : {0.0, 0.4}) {
          const double base = std::asin(std::sqrt((n - 1.0) / n));
          const double th = base + d, ph = base + e;
          const double m = n - 1.0;
          const double c2 = std::pow(std::cos(th) * std::cos(ph), 2) +
                            m * std::pow(std::sin(th) * std::sin(ph) / m, 2);
          const double env = m * (std::pow(std::cos(th) * std::sin(ph), 2) / m +
                                  std::pow(std::sin(th) * std::cos(ph), 2) / m +
                                  (m - 1) * std::pow(std::sin(th) * std::sin(ph) / m, 2));
          CHECK(c2 + env == Approx(1.0).margin(1e-12));
        }
      }
    }
  }
  for (double e : {0.1, 0.5}) {
    CHECK(fidelity_pure(mixed_w_purified(3, 0.2, 0), mixed_w_purified(3, 0.2, e)) ==
          Approx(std::cos(e) * std::cos(e)).margin(1e-9));
  }
  THEN("the symmetrized variant does not keep the cos^2 fidelity") {
    const double f = fidelity_pure(mixed_w_purified(3, 0.2, 0, WVariant::Symmetrized),
                                   mixed_w_purified(3, 0.2, 0.5, WVariant::Symmetrized));
    CHECK(std::abs(f - std::cos(0.5) * std::cos(0.5)) > 1e-4);
  }
  THEN("the exact n = 3, delta = 0.2 marginal purity is frozen") {
    CHECK(system_purity(mixed_w_purified(3, 0.2, 0)) == Approx(0.9234).margin(5e-5));
  }
  CHECK_THROWS_AS(mixed_w_purified(2, 0, 0), std::invalid_argument);
}

SCENARIO("seesaw qudit states") {
  CHECK(fidelity_pure(seesaw_qudit(2, 2, 0), bell(Bell::PhiPlus)) == Approx(1.0));
  const auto q = seesaw_qudit(3, 2, 0);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(q.amplitude(j * 4).real() == Approx(1 / std::sqrt(3.0)));
  }
  for (std::size_t D = 2; D <= 8; D += 2) {
    for (double d : {0.1, 0.6}) {
      CHECK(fidelity_pure(seesaw_qudit(D, 3, 0), seesaw_qudit(D, 3, d)) ==
            Approx(std::cos(d) * std::cos(d)).margin(1e-12));
    }
  }
  for (std::size_t n = 2; n <= 6; ++n) {
    CHECK(fidelity_pure(seesaw_qudit(2, n, 0), ghz(n)) == Approx(1.0).margin(1e-12));
  }
  CHECK_THROWS_AS(seesaw_qudit(1, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(seesaw_qudit(3, 1, 0), std::invalid_argument);
}

SCENARIO("four-qubit test states") {
  const auto b = bell(Bell::PhiPlus);
  CHECK(fidelity_pure(phi_plus_plus_4(0), tensor(b, b)) == Approx(1.0));
  for (double d : {0.0, 0.2, 0.5}) {
    const auto s = phi_plus_plus_4(d);
    for (const auto& pair : {SiteList{0, 1}, SiteList{2, 3}}) {
      const auto red = partial_trace(s, pair);
      CHECK(purity(red) == Approx(1.0).margin(1e-12));
      Eigen::SelfAdjointEigenSolver<Matrix> es(red.matrix());
      const PureState p(SiteLayout::qubits(2), es.eigenvectors().col(3));
      CHECK(concurrence_2q(p) == Approx(std::abs(std::cos(2 * d))).margin(1e-12));
    }
  }
  Vector zz(4);
  zz << 1, 0, 0, 0;
  const PureState s00(SiteLayout::qubits(2), zz);
  CHECK(fidelity_pure(chi_4(s00), tensor(s00, b)) == Approx(1.0));
  CHECK_THROWS_AS(chi_4(b), std::invalid_argument);
}

SCENARIO("Haar sampling") {
  HaarSampler s(3, 11);
  for (int k = 0; k < 1000; ++k) CHECK(std::abs(haar_random(s).amplitudes().norm() - 1) < 1e-12);
  HaarSampler a(3, 5), b(3, 5), c(3, 6);
  const auto xa = a.next();
  CHECK(xa.amplitudes() == b.next().amplitudes());
  CHECK(fidelity_pure(xa, c.next()) < 1.0);

  WHEN("2000 two-qubit samples are drawn") {
    HaarSampler h2(2, 99);
    double sum = 0, sum2 = 0;
    const int N = 2000;
    for (int k = 0; k < N; ++k) {
      const double p = purity(partial_trace(h2.next(), SiteList{0}));
      sum += p;
      sum2 += p * p;
    }
    const double mean = sum / N;
    const double se = std::sqrt((sum2 / N - mean * mean) / N);
    CHECK(std::abs(mean - oracle::haar_mean_purity(2, 2)) < 3 * se);
  }
  WHEN("overlaps with a fixed state are averaged") {
    for (std::size_t n : {1u, 3u}) {
      HaarSampler hs(n, 123 + n);
      const auto phi = PureState::basis(SiteLayout::qubits(n), 0);
      double sum = 0, sum2 = 0;
      const int N = 3000;
      for (int k = 0; k < N; ++k) {
        const double f = fidelity_pure(phi, hs.next());
        sum += f;
        sum2 += f * f;
      }
      const double mean = sum / N;
      const double se = std::sqrt((sum2 / N - mean * mean) / N);
      CHECK(std::abs(mean - 1.0 / double(std::size_t{1} << n)) < 3 * se);
    }
  }
}

SCENARIO("nested-angle constructor") {
  std::vector<double> xi(4, 0.0), th{pi / 2, pi / 2, pi / 2};
  CHECK(std::abs(nested_angle_state(2, xi, th).amplitude(3)) == Approx(1.0));
  th = {0.3, 0.7, 1.1};
  xi = {0.1, 0.2, 0.3, 0.4};
  const auto s = nested_angle_state(2, xi, th);
  CHECK(std::abs(s.amplitude(0)) == Approx(std::cos(0.3)));
  CHECK(std::abs(s.amplitude(2)) == Approx(std::sin(0.3) * std::sin(0.7) * std::cos(1.1)));
  CHECK(std::arg(s.amplitude(1)) == Approx(0.2));
  CHECK_THROWS_AS(nested_angle_state(2, xi, {0.1}), std::invalid_argument);
}

SCENARIO("GHZ/W superpositions") {
  CHECK(fidelity_pure(ghz_w_mixture(4, 0), ghz(4)) == Approx(1.0));
  CHECK(fidelity_pure(ghz_w_mixture(4, pi / 2), w(4)) == Approx(1.0));
  CHECK(fidelity_pure(ghz_w_mixture(3, pi / 4), ghz(3)) == Approx(0.5));
  CHECK_THROWS_AS(ghz_w_mixture(2, 0.1), std::invalid_argument);
}
