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

#include "dqdbus/algebra.hpp"
#include "dqdbus/hamiltonians.hpp"
#include "oracles.hpp"

using namespace dqdbus;
using Catch::Matchers::WithinAbs;

namespace {

ComplexMatrix diag(std::initializer_list<Complex> entries) {
  ComplexVector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index k = 0;
  for (Complex e : entries) v(k++) = e;
  return v.asDiagonal();
}

}  // namespace

TEST_CASE("kron", "[algebra]") {
  SECTION("identity") { CHECK(max_abs(kron(ops::identity(2), ops::identity(2)) - ops::identity(4)) == 0.0); }

  SECTION("sigma_z on the leading factor") {
    CHECK(max_abs(kron(ops::sigma_z(), ops::identity(2)) - diag({1, 1, -1, -1})) == 0.0);
  }

  SECTION("sigma+ (x) sigma- has one entry, <10| . |01>") {
    // kron(A, B)_{(a b),(a' b')} = A_{a a'} B_{b b'}: sigma+ maps 0 -> 1 on the first
    // factor, sigma- maps 1 -> 0 on the second, so the entry sits at row (1,0) = 2, col (0,1) = 1.
    const ComplexMatrix m = kron(ops::sigma_plus(), ops::sigma_minus());
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(2, 1) = 1.0;
    CHECK(max_abs(m - expected) == 0.0);
  }

  SECTION("associativity on random factors") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix a = oracle::random_hermitian(2, rng);
      const ComplexMatrix b = oracle::random_hermitian(3, rng);
      const ComplexMatrix c = oracle::random_hermitian(2, rng);
      CHECK(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))) < 1e-14);
    }
  }
}

TEST_CASE("HilbertSpace", "[algebra]") {
  const HilbertSpace s({2, 2, 3});
  CHECK(s.dimension() == 12);
  CHECK(s.stride(0) == 1);
  CHECK(s.stride(1) == 2);
  CHECK(s.stride(2) == 4);
  CHECK(HilbertSpace::qubits_and_cavity(2, 5) == HilbertSpace({2, 2, 6}));
  CHECK_THROWS_AS(HilbertSpace({}), std::invalid_argument);
  CHECK_THROWS_AS(HilbertSpace({2, 0}), std::invalid_argument);
}

TEST_CASE("embed", "[algebra]") {
  SECTION("single subsystem") {
    CHECK(max_abs(embed(ops::sigma_x(), 0, HilbertSpace({2})) - ops::sigma_x()) == 0.0);
  }

  SECTION("second of two qubits is the slow index") {
    const HilbertSpace two({2, 2});
    CHECK(max_abs(embed(ops::sigma_z(), 1, two) - tensor({ops::identity(2), ops::sigma_z()})) == 0.0);
    CHECK(max_abs(embed(ops::sigma_z(), 1, two) - diag({1, 1, -1, -1})) == 0.0);
    CHECK(max_abs(embed(ops::sigma_z(), 0, two) - diag({1, -1, 1, -1})) == 0.0);
  }

  SECTION("basis order {|00>, |10>, |01>, |11>}") {
    const HilbertSpace two({2, 2});
    const ComplexMatrix n0 = embed(ops::excited_projector(), 0, two);
    const ComplexMatrix n1 = embed(ops::excited_projector(), 1, two);
    CHECK(max_abs(n0 - diag({0, 1, 0, 1})) == 0.0);
    CHECK(max_abs(n1 - diag({0, 0, 1, 1})) == 0.0);
  }

  SECTION("a^dag a on the cavity") {
    const HilbertSpace s({2, 2, 3});
    const ComplexMatrix a = embed(ops::annihilation(2), 2, s);
    CHECK(max_abs(a.adjoint() * a - embed(ops::number(2), 2, s)) < 1e-15);
  }

  SECTION("operators on different subsystems commute") {
    std::mt19937_64 rng(2);
    const HilbertSpace s({2, 3, 2});
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix a = embed(oracle::random_hermitian(2, rng), 0, s);
      const ComplexMatrix b = embed(oracle::random_hermitian(3, rng), 1, s);
      const ComplexMatrix c = embed(oracle::random_hermitian(2, rng), 2, s);
      CHECK(max_abs(a * b - b * a) < 1e-12);
      CHECK(max_abs(a * c - c * a) < 1e-12);
      CHECK(max_abs(b * c - c * b) < 1e-12);
    }
  }

  SECTION("dimension mismatch") {
    CHECK_THROWS_AS(embed(ops::sigma_x(), 2, HilbertSpace({2, 2, 3})), std::invalid_argument);
    CHECK_THROWS_AS(embed(ops::sigma_x(), 3, HilbertSpace({2, 2, 3})), std::invalid_argument);
  }
}

TEST_CASE("expm_propagator", "[algebra]") {
  SECTION("zero generator") {
    CHECK(max_abs(expm_propagator(ComplexMatrix::Zero(3, 3), 1.7) - ops::identity(3)) < 1e-15);
  }

  SECTION("sigma_z for t = pi gives -I") {
    CHECK(max_abs(expm_propagator(ops::sigma_z(), std::numbers::pi) + ops::identity(2)) < 1e-15);
  }

  SECTION("reduced two-qubit generator against scaling-and-squaring") {
    const double lam = 2.0 * std::numbers::pi * 1e7;
    const double t0 = std::numbers::pi / (4.0 * lam);
    const ComplexMatrix h = h_reduced_two_qubit(lam);
    CHECK(max_abs(expm_propagator(h, t0) - oracle::expm_scaling_squaring(h, t0)) < 1e-9);
  }

  SECTION("unitary for random Hermitian generators") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> times(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
      const ComplexMatrix h = oracle::random_hermitian(6, rng);
      const double t = times(rng);
      const ComplexMatrix u = expm_propagator(h, t);
      CHECK(unitarity_error(u) < 1e-10);
      CHECK(max_abs(u - oracle::expm_scaling_squaring(h, t)) < 1e-9);
    }
  }

  SECTION("non-Hermitian input is rejected") {
    CHECK_THROWS_AS(expm_propagator(ops::sigma_plus(), 1.0), std::invalid_argument);
  }
}

TEST_CASE("states", "[algebra]") {
  CHECK_THROWS_AS(PureState(HilbertSpace({2}), ComplexVector::Ones(2)), std::invalid_argument);
  CHECK_THROWS_AS(PureState(HilbertSpace({2}), ComplexVector::Ones(3).normalized()), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(HilbertSpace({2}), ops::identity(2)), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(HilbertSpace({2}), diag({1.5, -0.5})), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(HilbertSpace({2}), ops::sigma_plus() + 0.5 * ops::identity(2)), std::invalid_argument);
  CHECK_NOTHROW(DensityMatrix(HilbertSpace({2}), 0.5 * ops::identity(2)));

  const std::array<std::size_t, 3> levels{1, 0, 2};
  const PureState p = PureState::product(HilbertSpace({2, 2, 3}), levels);
  CHECK(p.amplitudes()(1 + 0 * 2 + 2 * 4) == Complex(1.0));
}

TEST_CASE("partial_trace", "[algebra]") {
  std::mt19937_64 rng(4);

  SECTION("product state factorizes") {
    const ComplexMatrix ra = oracle::random_density(2, rng);
    const ComplexMatrix rb = oracle::random_density(3, rng);
    const DensityMatrix rho(HilbertSpace({2, 3}), tensor({ra, rb}));
    CHECK(max_abs(partial_trace(rho, {0}).matrix() - ra) < 1e-14);
    CHECK(max_abs(partial_trace(rho, {1}).matrix() - rb) < 1e-14);
  }

  SECTION("Bell state reduces to I/2") {
    ComplexVector phi = ComplexVector::Zero(4);
    phi(0) = phi(3) = 1.0 / std::numbers::sqrt2;
    const DensityMatrix rho(PureState(HilbertSpace::qubits(2), phi));
    CHECK(max_abs(partial_trace(rho, {0}).matrix() - 0.5 * ops::identity(2)) < 1e-15);
  }

  SECTION("trace, Hermiticity and positivity are preserved") {
    const HilbertSpace s({2, 2, 3});
    for (int trial = 0; trial < 25; ++trial) {
      const DensityMatrix rho(s, oracle::random_density(12, rng));
      for (auto keep : {std::vector<std::size_t>{1}, {0, 2}, {2}, {0, 1}}) {
        const ComplexMatrix r = partial_trace(rho.matrix(), s, keep);
        CHECK(std::abs(r.trace() - rho.matrix().trace()) < 1e-12);
        CHECK(hermiticity_error(r) < 1e-14);
        CHECK(min_eigenvalue(r) >= -1e-9);
      }
    }
  }

  SECTION("keep order does not matter") {
    const HilbertSpace s({2, 3, 2});
    const DensityMatrix rho(s, oracle::random_density(12, rng));
    CHECK(max_abs(partial_trace(rho, {2, 0}).matrix() - partial_trace(rho, {0, 2}).matrix()) == 0.0);
  }

  SECTION("invalid keep sets") {
    const DensityMatrix rho(HilbertSpace({2, 2}), 0.25 * ops::identity(4));
    CHECK_THROWS_AS(partial_trace(rho, {}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, {2}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, {0, 0}), std::invalid_argument);
  }
}

TEST_CASE("fidelity", "[algebra]") {
  const HilbertSpace qubit({2});
  const PureState zero = PureState::basis(qubit, 0);
  const PureState one = PureState::basis(qubit, 1);
  std::mt19937_64 rng(5);
  const PureState psi(HilbertSpace({2, 2}), oracle::random_state(4, rng));

  CHECK_THAT(fidelity(psi, psi), WithinAbs(1.0, 1e-15));
  CHECK(fidelity(zero, one) == 0.0);
  CHECK_THAT(fidelity(DensityMatrix(qubit, 0.5 * ops::identity(2)), zero), WithinAbs(0.5, 1e-15));
  CHECK_THAT(fidelity(DensityMatrix(psi), psi), WithinAbs(1.0, 1e-14));
  CHECK_THROWS_AS(fidelity(psi, zero), std::invalid_argument);
}

TEST_CASE("concurrence", "[algebra]") {
  const HilbertSpace two = HilbertSpace::qubits(2);
  ComplexVector epr = ComplexVector::Zero(4);
  epr(1) = 1.0 / std::numbers::sqrt2;
  epr(2) = -kI / std::numbers::sqrt2;

  CHECK_THAT(concurrence(DensityMatrix(PureState(two, epr))), WithinAbs(1.0, 1e-12));
  CHECK_THAT(concurrence(DensityMatrix(PureState::basis(two, 0))), WithinAbs(0.0, 1e-12));
  CHECK_THAT(concurrence(DensityMatrix(two, 0.25 * ops::identity(4))), WithinAbs(0.0, 1e-12));

  SECTION("pure states: C = 2 |a d - b c|") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 25; ++trial) {
      const ComplexVector v = oracle::random_state(4, rng);
      const double expected = 2.0 * std::abs(v(0) * v(3) - v(1) * v(2));
      CHECK_THAT(concurrence(DensityMatrix(PureState(two, v))), WithinAbs(expected, 1e-7));
    }
  }

  SECTION("Werner states: C = max(0, (3p - 1) / 2)") {
    ComplexVector bell = ComplexVector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::numbers::sqrt2;
    for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
      const ComplexMatrix rho = p * bell * bell.adjoint() + (1.0 - p) / 4.0 * ops::identity(4);
      CHECK_THAT(concurrence(DensityMatrix(two, rho)), WithinAbs(std::max(0.0, (3.0 * p - 1.0) / 2.0), 1e-7));
    }
  }

  CHECK_THROWS_AS(concurrence(DensityMatrix(HilbertSpace({2}), 0.5 * ops::identity(2))), std::invalid_argument);
}
