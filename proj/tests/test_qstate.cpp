// Copyright 2026 The qlang Authors
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

#include <cmath>
#include <numbers>
#include <vector>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "qlang/error.hpp"
#include "qlang/qstate.hpp"

using namespace qlang;
using Catch::Approx;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

PureState bell() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = std::numbers::sqrt2 / 2.0;
  return PureState(v);
}

PureState plus() {
  Vector v(2);
  v << std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0;
  return PureState(v);
}

PureState minus() {
  Vector v(2);
  v << std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0;
  return PureState(v);
}

DensityOperator werner(double p) {
  const Matrix phi = DensityOperator::from_pure(bell()).matrix();
  return DensityOperator(p * phi + (1.0 - p) * Matrix::Identity(4, 4) / 4.0);
}

std::vector<int> range(int from, int to) {
  std::vector<int> v;
  for (int q = from; q < to; ++q) v.push_back(q);
  return v;
}

}  // namespace

TEST_CASE("tensor of maximally mixed qubits is I/4") {
  const auto r = tensor(DensityOperator::maximally_mixed(1), DensityOperator::maximally_mixed(1));
  CHECK(max_abs(r.matrix() - Matrix::Identity(4, 4) / 4.0) < 1e-15);
}

TEST_CASE("tensor of basis projectors is |01><01|") {
  const auto r = tensor(DensityOperator::from_pure(PureState::basis(1, 0)),
                        DensityOperator::from_pure(PureState::basis(1, 1)));
  Matrix expect = Matrix::Zero(4, 4);
  expect(1, 1) = 1.0;
  CHECK(max_abs(r.matrix() - expect) < 1e-15);
}

TEST_CASE("tensor matches naive Kronecker product and has unit trace") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto a = random_density_operator(2, 3, s);
    const auto b = random_density_operator(1, 2, s + 100);
    const auto t = tensor(a, b);
    CHECK(max_abs(t.matrix() - oracle::kron(a.matrix(), b.matrix())) < 1e-14);
    CHECK(std::abs(t.matrix().trace() - 1.0) < 1e-12);
  }
}

TEST_CASE("tensor refuses to exceed the qubit cap") {
  CHECK_THROWS_AS(tensor(PureState::zeros(8), PureState::zeros(7)), Error);
  try {
    tensor(PureState::zeros(8), PureState::zeros(7));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Resource);
  }
}

TEST_CASE("qubit 0 is the most significant bit") {
  const auto s = tensor(PureState::basis(1, 1), PureState::zeros(2));
  CHECK(std::abs(s[4] - Complex(1.0)) < 1e-15);
}

TEST_CASE("partial trace of a Bell state is I/2 on either side") {
  const auto b = bell();
  for (int q : {0, 1}) {
    const std::vector<int> keep{q};
    const auto r = partial_trace(b, keep);
    CHECK(max_abs(r.matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-15);
    CHECK(max_abs(r.matrix() - oracle::ptrace(oracle::projector(b.amplitudes()), 2, keep)) < 1e-15);
  }
}

TEST_CASE("partial trace keeping everything is the identity map") {
  const auto rho = random_density_operator(3, 4, 5);
  const auto keep = range(0, 3);
  CHECK(max_abs(partial_trace(rho, keep).matrix() - rho.matrix()) < 1e-15);
}

TEST_CASE("partial trace of |0>|+> onto qubit 1 is |+><+|") {
  const auto s = tensor(PureState::zeros(1), plus());
  const std::vector<int> keep{1};
  CHECK(max_abs(partial_trace(s, keep).matrix() - DensityOperator::from_pure(plus()).matrix()) < 1e-15);
}

TEST_CASE("partial trace inverts tensor for random pairs up to 3+3 qubits") {
  std::uint64_t seed = 1;
  for (int na = 1; na <= 3; ++na)
    for (int nb = 1; nb <= 3; ++nb) {
      const auto a = random_density_operator(na, 2, seed++);
      const auto b = random_density_operator(nb, 3, seed++);
      const auto ab = tensor(a, b);
      const auto keep_a = range(0, na);
      const auto keep_b = range(na, na + nb);
      CHECK(max_abs(partial_trace(ab, keep_a).matrix() - a.matrix()) < 1e-10);
      CHECK(max_abs(partial_trace(ab, keep_b).matrix() - b.matrix()) < 1e-10);
    }
}

TEST_CASE("partial trace agrees with the index-loop oracle on scattered subsets") {
  const auto rho = random_density_operator(4, 5, 17);
  const std::vector<int> keep{0, 2, 3};
  CHECK(max_abs(partial_trace(rho, keep).matrix() - oracle::ptrace(rho.matrix(), 4, keep)) < 1e-14);
}

TEST_CASE("purity values") {
  CHECK(purity(DensityOperator::maximally_mixed(1)) == Approx(0.5).margin(1e-15));
  CHECK(purity(DensityOperator::from_pure(random_pure_state(3, 4))) == Approx(1.0).margin(1e-12));
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.75;
  m(1, 1) = 0.25;
  CHECK(purity(DensityOperator(m)) == Approx(0.625).margin(1e-15));
}

TEST_CASE("Schmidt symmetry of reduced purities for every bipartition") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto phi = random_pure_state(4, s);
    for (unsigned mask = 1; mask < 15; ++mask) {
      std::vector<int> a;
      std::vector<int> b;
      for (int q = 0; q < 4; ++q) ((mask >> q) & 1U ? a : b).push_back(q);
      CHECK(std::abs(purity(partial_trace(phi, a)) - purity(partial_trace(phi, b))) < 1e-10);
    }
  }
}

TEST_CASE("overlap values and symmetry") {
  const auto zero = PureState::basis(1, 0);
  const auto one = PureState::basis(1, 1);
  CHECK(overlap(zero, one) == Approx(0.0).margin(1e-15));
  CHECK(overlap(zero, plus()) == Approx(0.5).margin(1e-15));
  CHECK(overlap(plus(), plus()) == Approx(1.0).margin(1e-15));
  CHECK(overlap(DensityOperator::from_pure(zero), DensityOperator::from_pure(plus())) ==
        Approx(0.5).margin(1e-15));
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto a = random_density_operator(2, 2, s);
    const auto b = random_density_operator(2, 3, s + 50);
    CHECK(std::abs(overlap(a, b) - overlap(b, a)) < 1e-14);
    CHECK(std::abs(overlap(a, a) - purity(a)) < 1e-14);
    CHECK(std::abs(overlap(a, b) - oracle::trace_product(a.matrix(), b.matrix())) < 1e-14);
  }
}

TEST_CASE("Schmidt spectrum of Bell and product states") {
  const auto cut = Bipartition::from_subset(2, {0});
  const auto sb = schmidt_spectrum(bell(), cut);
  REQUIRE(sb.coefficients.size() == 2);
  CHECK(sb.coefficients[0] == Approx(1.0 / std::sqrt(2.0)).margin(1e-14));
  CHECK(sb.coefficients[1] == Approx(1.0 / std::sqrt(2.0)).margin(1e-14));
  const auto sp = schmidt_spectrum(tensor(PureState::zeros(1), plus()), cut);
  CHECK(sp.coefficients[0] == Approx(1.0).margin(1e-14));
  CHECK(sp.coefficients[1] == Approx(0.0).margin(1e-14));
  CHECK(sp.is_product());
  CHECK_FALSE(sb.is_product());
}

TEST_CASE("Schmidt coefficients match the reduced-spectrum oracle and square-sum to 1") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto phi = random_pure_state(4, s);
    const auto cut = Bipartition::from_string("1010");
    const auto sp = schmidt_spectrum(phi, cut);
    const auto ref = oracle::schmidt_by_eigen(phi.amplitudes(), 4, cut.subset_a());
    double sum = 0.0;
    for (std::size_t i = 0; i < sp.coefficients.size(); ++i) {
      sum += sp.coefficients[i] * sp.coefficients[i];
      CHECK(std::abs(sp.coefficients[i] - ref[i]) < 1e-9);
    }
    CHECK(sum == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("Schmidt decomposition reconstructs the state") {
  const auto phi = random_pure_state(3, 9);
  const auto cut = Bipartition::from_subset(3, {1});
  const auto d = schmidt_decompose(phi, cut);
  // Rebuild in subset order A then B, then move qubits back.
  Vector v = Vector::Zero(8);
  for (std::size_t k = 0; k < d.spectrum.coefficients.size(); ++k)
    v += d.spectrum.coefficients[k] *
         oracle::kron(Vector(d.left.col(static_cast<Eigen::Index>(k))),
                      Vector(d.right.col(static_cast<Eigen::Index>(k))));
  const std::vector<int> order{1, 0, 2};
  const auto moved = permute_qubits(phi, order);
  CHECK((v - moved.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("random pure states are deterministic and normalized") {
  const auto a = random_pure_state(3, 77);
  const auto b = random_pure_state(3, 77);
  CHECK(a.amplitudes() == b.amplitudes());
  CHECK(std::abs(a.amplitudes().norm() - 1.0) < 1e-12);
  CHECK(random_pure_state(3, 78).amplitudes() != a.amplitudes());
}

TEST_CASE("Haar first moment of |<0..0|xi>|^2 is 2^-n") {
  for (int n : {1, 2, 3}) {
    const int samples = 10000;
    double sum = 0.0;
    double sq = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double p = std::norm(random_pure_state(n, static_cast<std::uint64_t>(s))[0]);
      sum += p;
      sq += p * p;
    }
    const double mean = sum / samples;
    const double se = std::sqrt((sq / samples - mean * mean) / samples);
    CHECK(std::abs(mean - std::ldexp(1.0, -n)) < 5.0 * se);
  }
}

TEST_CASE("random product states are product across their cut") {
  const auto cut = Bipartition::from_string("0110");
  for (std::uint64_t s = 0; s < 5; ++s)
    CHECK(schmidt_spectrum(random_product_state(cut, s), cut).is_product());
  const auto p = random_local_product_state(3, 4);
  for (int q = 0; q < 3; ++q) CHECK(schmidt_spectrum(p, Bipartition::from_subset(3, {q})).is_product());
}

TEST_CASE("random unitaries are unitary") {
  const auto u = random_unitary(8, 3);
  CHECK(max_abs(u.adjoint() * u - Matrix::Identity(8, 8)) < 1e-12);
}

TEST_CASE("separability oracle on pure states") {
  const auto v = is_separable_oracle(bell(), Bipartition::from_subset(2, {0}));
  CHECK_FALSE(v.separable);
  CHECK(v.margin == Approx(1.0 - 1.0 / std::sqrt(2.0)).margin(1e-12));
  CHECK(v.method == SeparabilityMethod::Schmidt);
  CHECK(is_separable_oracle(PureState::zeros(2), Bipartition::from_subset(2, {0})).separable);
}

TEST_CASE("PPT oracle on Werner states") {
  const auto cut = Bipartition::from_subset(2, {0});
  const std::vector<int> side{1};
  for (double p : {0.9, 0.4, 0.3, 1.0 / 3.0 - 1e-3, 1.0 / 3.0 + 1e-3}) {
    const auto w = werner(p);
    const auto v = is_separable_oracle(w, cut);
    const double lam = oracle::min_partial_transpose_eigenvalue(w.matrix(), 2, side);
    CHECK(v.method == SeparabilityMethod::PartialTranspose);
    CHECK(v.separable == (lam >= -1e-12));
    CHECK(v.margin == Approx(std::max(0.0, -lam)).margin(1e-12));
  }
  CHECK_FALSE(is_separable_oracle(werner(0.9), cut).separable);
  CHECK(is_separable_oracle(werner(0.9), cut).margin == Approx(0.425).margin(1e-12));
  CHECK_FALSE(is_separable_oracle(werner(0.4), cut).separable);
  CHECK(is_separable_oracle(werner(0.4), cut).margin == Approx(0.05).margin(1e-12));
  CHECK(is_separable_oracle(werner(0.3), cut).separable);
}

TEST_CASE("PPT oracle refuses mixed cuts it cannot decide") {
  const auto rho = random_density_operator(3, 2, 1);
  try {
    is_separable_oracle(rho, Bipartition::from_subset(3, {0}));
    FAIL("expected an unsupported-oracle error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedOracle);
  }
}

TEST_CASE("Schmidt rank one iff the oracle reports separable, all cuts up to 8 qubits") {
  std::uint64_t seed = 0;
  for (int n = 2; n <= 8; n += 2) {
    const auto entangled = random_pure_state(n, seed++);
    std::vector<int> half = range(0, n / 2);
    const auto product = random_product_state(Bipartition::from_subset(n, half), seed++);
    for (const auto& phi : {entangled, product})
      for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); mask += 1 + (n > 6 ? 13 : 0)) {
        std::vector<int> a;
        for (int q = 0; q < n; ++q)
          if ((mask >> q) & 1U) a.push_back(q);
        const auto cut = Bipartition::from_subset(n, a);
        const auto sp = schmidt_spectrum(phi, cut);
        CHECK((sp.rank() == 1) == is_separable_oracle(phi, cut).separable);
      }
  }
}

TEST_CASE("decompose_hermitian examples") {
  const Matrix phi = DensityOperator::from_pure(bell()).matrix();
  const Matrix w = 0.5 * Matrix::Identity(4, 4) - phi;
  const auto terms = decompose_hermitian(w);
  CHECK(terms.size() <= 2);
  CHECK(max_abs(recompose(terms) - w) < 1e-10);

  const auto rho = random_density_operator(2, 2, 3);
  const auto one = decompose_hermitian(rho.matrix());
  REQUIRE(one.size() == 1);
  CHECK(one[0].coefficient == Approx(1.0).margin(1e-12));

  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = -1.0;
  const auto n1 = decompose_hermitian(neg);
  REQUIRE(n1.size() == 1);
  CHECK(n1[0].coefficient == Approx(-1.0).margin(1e-12));
  CHECK(max_abs(n1[0].state.matrix() - DensityOperator::from_pure(PureState::basis(1, 0)).matrix()) < 1e-12);
}

TEST_CASE("decompose_hermitian round-trips random Hermitian matrices") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Matrix g = random_unitary(8, s) * Eigen::VectorXd::LinSpaced(8, -1.5, 2.0).cast<Complex>().asDiagonal() *
                     random_unitary(8, s).adjoint();
    const Matrix w = 0.5 * (g + g.adjoint());
    CHECK(max_abs(w - recompose(decompose_hermitian(w))) < 1e-9);
  }
}

TEST_CASE("permute_qubits moves amplitudes") {
  const auto s = tensor(PureState::basis(1, 1), PureState::zeros(2));  // |100>
  const std::vector<int> order{1, 2, 0};
  const auto p = permute_qubits(s, order);  // output qubit 2 carries input qubit 0
  CHECK(std::abs(p[1] - Complex(1.0)) < 1e-15);
}

TEST_CASE("partial transpose agrees with the index-loop oracle") {
  const auto rho = random_density_operator(2, 4, 8);
  const std::vector<int> side{1};
  const Matrix pt = partial_transpose(rho.matrix(), 2, side);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt);
  CHECK(es.eigenvalues()(0) ==
        Approx(oracle::min_partial_transpose_eigenvalue(rho.matrix(), 2, side)).margin(1e-12));
}

TEST_CASE("as_pure recovers a pure density operator") {
  const auto phi = random_pure_state(2, 6);
  const auto back = as_pure(DensityOperator::from_pure(phi));
  REQUIRE(back.has_value());
  CHECK(overlap(*back, phi) == Approx(1.0).margin(1e-12));
  CHECK_FALSE(as_pure(DensityOperator::maximally_mixed(2)).has_value());
}

TEST_CASE("padded distance pads the shorter state with |0>") {
  CHECK(padded_distance(PureState::zeros(1), PureState::zeros(3)) == Approx(0.0).margin(1e-15));
  CHECK(padded_distance(PureState::basis(1, 1), PureState::zeros(2)) == Approx(std::sqrt(2.0)).margin(1e-15));
  CHECK(padded_distance(plus(), minus()) == Approx(std::sqrt(2.0)).margin(1e-15));
}

TEST_CASE("state constructors validate their inputs") {
  Vector v(2);
  v << 0.8, 0.0;
  CHECK_THROWS_AS(PureState(v), Error);
  Vector odd = Vector::Zero(3);
  odd(0) = 1.0;
  CHECK_THROWS_AS(PureState(odd), Error);
  Matrix nonherm = Matrix::Zero(2, 2);
  nonherm(0, 0) = 1.0;
  nonherm(0, 1) = 0.3;
  CHECK_THROWS_AS(DensityOperator(nonherm), Error);
  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityOperator(negative), Error);
  CHECK_THROWS_AS(Bipartition::from_string("11"), Error);
  CHECK_THROWS_AS(Bipartition::from_string("1x"), Error);
}
