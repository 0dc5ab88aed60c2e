// Copyright 2026 The dqdbus Authors
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

#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "dqdbus/hamiltonians.hpp"
#include "oracles.hpp"

using namespace dqdbus;
using Catch::Matchers::WithinAbs;

namespace {

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

}  // namespace

TEST_CASE("ModelParams", "[hamiltonians]") {
  ModelParams p = ModelParams::identical(2, 1.0, 10.0);
  CHECK(p.photon_cutoff == 5);
  CHECK(p.is_dispersive());
  REQUIRE(p.lambda().has_value());
  CHECK(*p.lambda() == 0.1);

  p.detunings_tau[1] = 4.0;
  CHECK_FALSE(p.is_dispersive());
  CHECK_FALSE(p.lambda().has_value());

  p.detunings_tau[1] = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.detunings_tau.pop_back();
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("h_cavity", "[hamiltonians]") {
  const ComplexMatrix h1 = h_cavity(1.0, 1);
  CHECK(h1(0, 0) == 0.0);
  CHECK(h1(1, 1) == 1.0);
  CHECK(h1.rows() == 2);

  const ComplexMatrix h = h_cavity(2.5, 7);
  CHECK_THAT(h.trace().real(), WithinAbs(2.5 * 7 * 8 / 2.0, 1e-12));
  const ComplexMatrix a = ops::annihilation(7);
  CHECK(max_abs(commutator(h, a.adjoint() * a)) < 1e-14);
  CHECK_THROWS_AS(h_cavity(1.0, 0), std::invalid_argument);
}

TEST_CASE("h_double_dot", "[hamiltonians]") {
  CHECK(max_abs(h_double_dot(DotParams{0.0, 0.0, 1.0, 0.0, 0.0})) == 0.0);

  const double tc = 1.3;
  const ComplexMatrix h = h_double_dot(DotParams{0.0, tc, 1.0, 0.0, 0.0});
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  // Spectrum {-Tc, 0 (triplet), +Tc}.
  CHECK_THAT(es.eigenvalues()(0), WithinAbs(-tc, 1e-14));
  CHECK_THAT(es.eigenvalues()(1), WithinAbs(0.0, 1e-14));
  CHECK_THAT(es.eigenvalues()(2), WithinAbs(tc, 1e-14));

  // theta = pi/4 eigenstates: |S~> = (|(1,1)S> + |(0,2)S>)/sqrt2, |G~> = (-|(1,1)S> + |(0,2)S>)/sqrt2.
  ComplexVector s_tilde(3), g_tilde(3);
  s_tilde << 0.0, 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
  g_tilde << 0.0, -1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
  CHECK_THAT(std::abs(s_tilde.dot(es.eigenvectors().col(2))), WithinAbs(1.0, 1e-14));
  CHECK_THAT(std::abs(g_tilde.dot(es.eigenvectors().col(0))), WithinAbs(1.0, 1e-14));

  // Triplet stays decoupled.
  const ComplexMatrix ht = h_double_dot(DotParams{0.4, tc, 1.0, 0.7, 0.0});
  CHECK(ht(0, 0) == 0.7);
  CHECK(ht(0, 1) == 0.0);
  CHECK(ht(0, 2) == 0.0);
  CHECK(ht(2, 2) == -0.4);
}

TEST_CASE("h_interaction", "[hamiltonians]") {
  SECTION("no coupling") {
    const ModelParams p = ModelParams::identical(2, 0.0, 10.0, 3);
    for (double t : {0.0, 0.3, 17.0}) CHECK(max_abs(h_interaction(t, p)) == 0.0);
  }

  SECTION("one qubit at t = 0 is the JC coupling") {
    const double g = 0.7;
    const ModelParams p = ModelParams::identical(1, g, 5.0, 4);
    const ComplexMatrix a = ops::annihilation(4);
    const ComplexMatrix jc =
        g * (tensor({ops::sigma_plus(), a}) + tensor({ops::sigma_minus(), ComplexMatrix(a.adjoint())}));
    CHECK(max_abs(h_interaction(0.0, p) - jc) < 1e-15);
  }

  SECTION("phases follow the detuning") {
    // <0, 1 photon| H(t) |1, 0 photons> = g e^{-i tau t}
    const ModelParams p = ModelParams::identical(1, 0.7, 5.0, 2);
    const double t = 0.37;
    const ComplexMatrix h = h_interaction(t, p);
    CHECK(std::abs(h(2, 1) - 0.7 * std::exp(-kI * (5.0 * t))) < 1e-15);
  }

  SECTION("Hermitian and excitation conserving at random times") {
    ModelParams p = ModelParams::identical(3, 1.0, 10.0, 3);
    p.couplings_g = {1.0, 0.8, 1.3};
    p.detunings_tau = {10.0, -12.0, 25.0};
    const ComplexMatrix n_exc = excitation_number(p);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> times(0.0, 100.0);
    const InteractionHamiltonian h(p);
    for (int trial = 0; trial < 100; ++trial) {
      const ComplexMatrix ht = h(times(rng));
      CHECK(hermiticity_error(ht) < 1e-13);
      CHECK(max_abs(commutator(ht, n_exc)) < 1e-12);
    }
  }
}

TEST_CASE("h_effective", "[hamiltonians]") {
  const double g = 1.0, tau = 10.0, lam = g * g / tau;
  const ModelParams p = ModelParams::identical(2, g, tau, 5);
  const ComplexMatrix h = h_effective(p);

  CHECK(hermiticity_error(h) < 1e-13);
  CHECK(std::abs(h(0, 0)) == 0.0);
  CHECK(max_abs(commutator(h, excitation_number(p))) < 1e-12);

  SECTION("vacuum block reproduces the reduced two-qubit Hamiltonian") {
    CHECK(max_abs(cavity_vacuum_block(h, 2) - h_reduced_two_qubit(lam)) < 1e-12);
  }

  SECTION("diagonal element of |10> with one photon") {
    // qubit 0 excited: lambda <a a^dag> = 2 lambda; qubit 1 ground: -lambda <a^dag a> = -lambda.
    const std::array<std::size_t, 3> levels{1, 0, 1};
    const PureState s = PureState::product(p.space(), levels);
    const Complex e = s.amplitudes().dot(h * s.amplitudes());
    CHECK_THAT(e.real(), WithinAbs(lam, 1e-14));
  }

  SECTION("three qubits stay Hermitian and conserving") {
    const ModelParams p3 = ModelParams::identical(3, g, tau, 2);
    const ComplexMatrix h3 = h_effective(p3);
    CHECK(hermiticity_error(h3) < 1e-13);
    CHECK(max_abs(commutator(h3, excitation_number(p3))) < 1e-12);
  }

  SECTION("rejections") {
    CHECK_THROWS_AS(h_effective(ModelParams::identical(2, 1.0, 4.0)), std::invalid_argument);
    ModelParams mixed = p;
    mixed.couplings_g[1] = 0.9;
    CHECK_THROWS_AS(h_effective(mixed), std::invalid_argument);
  }
}

TEST_CASE("h_reduced_two_qubit", "[hamiltonians]") {
  const double lam = 0.37;
  const ComplexMatrix h = h_reduced_two_qubit(lam);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  CHECK_THAT(es.eigenvalues()(0), WithinAbs(0.0, 1e-15));
  CHECK_THAT(es.eigenvalues()(1), WithinAbs(0.0, 1e-15));
  CHECK_THAT(es.eigenvalues()(2), WithinAbs(2 * lam, 1e-15));
  CHECK_THAT(es.eigenvalues()(3), WithinAbs(2 * lam, 1e-15));

  CHECK(h(1, 2) == lam);  // <10|H|01>
  CHECK(h(2, 1) == lam);
  CHECK(h(3, 3) == 2 * lam);
  CHECK(max_abs(h_reduced_two_qubit(0.0)) == 0.0);
  CHECK_THROWS_AS(h_reduced_two_qubit(-1.0), std::invalid_argument);
}

TEST_CASE("analytic_u", "[hamiltonians]") {
  const double lam = 2.0 * std::numbers::pi * 1e7;
  CHECK(max_abs(analytic_u(lam, 0.0) - ops::identity(4)) == 0.0);

  SECTION("t0 turns |10> into the entangled target up to e^{-i pi/4}") {
    const double t0 = std::numbers::pi / (4.0 * lam);
    const ComplexVector out = analytic_u(lam, t0).col(1);
    ComplexVector expected = ComplexVector::Zero(4);
    expected(1) = std::exp(-kI * (std::numbers::pi / 4.0)) / std::numbers::sqrt2;
    expected(2) = -kI * std::exp(-kI * (std::numbers::pi / 4.0)) / std::numbers::sqrt2;
    CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-15);
  }

  SECTION("matches both exponential routes at random times") {
    std::mt19937_64 rng(10);
    const double t0 = std::numbers::pi / (4.0 * lam);
    std::uniform_real_distribution<double> times(0.0, 8.0 * t0);
    const ComplexMatrix h = h_reduced_two_qubit(lam);
    for (int trial = 0; trial < 50; ++trial) {
      const double t = times(rng);
      const ComplexMatrix u = analytic_u(lam, t);
      CHECK(max_abs(u - expm_propagator(h, t)) < 1e-10);
      CHECK(max_abs(u - oracle::expm_scaling_squaring(h, t)) < 1e-10);
      CHECK(unitarity_error(u) < 1e-10);
      CHECK_THAT(std::abs(u(3, 3)), WithinAbs(1.0, 1e-15));
      // Central block as printed: (e^{-2i lambda t} +- 1) / 2.
      const Complex phase = std::exp(-2.0 * kI * (lam * t));
      CHECK(std::abs(u(1, 1) - 0.5 * (phase + 1.0)) < 1e-15);
      CHECK(std::abs(u(1, 2) - 0.5 * (phase - 1.0)) < 1e-15);
    }
  }
}
