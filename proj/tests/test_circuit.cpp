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
#include <filesystem>
#include <numbers>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "qlang/circuit.hpp"
#include "qlang/error.hpp"
#include "qlang/rng.hpp"

using namespace qlang;
using Catch::Approx;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

PureState bell() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = std::numbers::sqrt2 / 2.0;
  return PureState(v);
}

DensityOperator mixed_one_qubit(double p) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = p;
  m(1, 1) = 1.0 - p;
  return DensityOperator(m);
}

Circuit random_circuit(int n, std::uint64_t seed, int depth) {
  CounterRng rng(seed, 1);
  Circuit c(n);
  for (int k = 0; k < depth; ++k) {
    const int q = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
    switch (rng.next_u64() % 5) {
      case 0: c.add(Gate::hadamard(q)); break;
      case 1: c.add(Gate::pauli_x(q)); break;
      case 2: c.add(Gate::unitary(random_unitary(2, seed * 131 + static_cast<std::uint64_t>(k)), {q})); break;
      case 3:
        if (n >= 2) {
          const int r = (q + 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n - 1))) % n;
          c.add(Gate::unitary(random_unitary(4, seed * 977 + static_cast<std::uint64_t>(k)), {r, q}));
        }
        break;
      default:
        if (n >= 3) c.add(Gate::toffoli({(q + 1) % n, (q + 2) % n}, q));
        break;
    }
  }
  return c;
}

}  // namespace

TEST_CASE("estimation network for n=1 has three qubits and three gates") {
  const auto c = build_estimation_network(1);
  CHECK(c.num_qubits() == 3);
  CHECK(c.gates().size() == 3);
  CHECK(c.gates()[0].kind() == GateKind::Hadamard);
  CHECK(c.gates()[1].kind() == GateKind::ControlledSwapBlock);
  CHECK(c.gates()[2].kind() == GateKind::Hadamard);
  CHECK(c.measured() == std::vector<int>{0});
}

TEST_CASE("estimation network size limit") {
  CHECK_NOTHROW(build_estimation_network(6));
  CHECK_THROWS_AS(build_estimation_network(7), Error);
}

TEST_CASE("swap test P0 equals (1 + tr rho^2)/2 for random qubits") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto rho = random_density_operator(1, 2, s);
    CHECK(std::abs(swap_test_p0(rho, rho) - (purity(rho) + 1.0) / 2.0) < 1e-12);
  }
}

TEST_CASE("swap test on identical pure inputs gives P0 = 1") {
  const auto phi = random_pure_state(2, 4);
  CHECK(swap_test_p0(phi, phi) == Approx(1.0).margin(1e-12));
  const auto rho = DensityOperator::from_pure(phi);
  CHECK(swap_test_p0(rho, rho) == Approx(1.0).margin(1e-12));
}

TEST_CASE("swap test law against the explicit-unitary oracle for 1-3 qubit mixed pairs") {
  std::uint64_t seed = 10;
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k < 5; ++k) {
      const auto a = random_density_operator(n, 2, seed++);
      const auto b = random_density_operator(n, 3, seed++);
      const double p0 = swap_test_p0(a, b);
      CHECK(std::abs(p0 - oracle::swap_test_p0(a.matrix(), b.matrix())) < 1e-12);
      CHECK(std::abs(2.0 * p0 - 1.0 - overlap(a, b)) < 1e-10);
    }
}

TEST_CASE("evolve_exact basics") {
  const auto rho = random_density_operator(2, 3, 1);
  Circuit empty(2);
  CHECK(max_abs(evolve_exact(empty, rho).matrix() - rho.matrix()) < 1e-15);
  Circuit hh(2);
  hh.add(Gate::hadamard(1)).add(Gate::hadamard(1));
  CHECK(max_abs(evolve_exact(hh, rho).matrix() - rho.matrix()) < 1e-10);
}

TEST_CASE("E_1 on |0><0| (x) I/2 (x) I/2 gives P0 = 0.75") {
  const auto c = build_estimation_network(1);
  const auto mm = DensityOperator::maximally_mixed(1);
  const auto input = tensor(DensityOperator::from_pure(PureState::zeros(1)), tensor(mm, mm));
  CHECK(probability_of_outcome(c, input, "0") == Approx(0.75).margin(1e-12));
  CHECK(oracle::swap_test_p0(mm.matrix(), mm.matrix()) == Approx(0.75).margin(1e-12));
}

TEST_CASE("probability_of_outcome examples") {
  const auto c = build_estimation_network(1);
  const auto zero = PureState::zeros(1);
  const auto phi = random_pure_state(1, 3);
  CHECK(probability_of_outcome(c, tensor(zero, tensor(phi, phi)), "0") == Approx(1.0).margin(1e-12));
  CHECK(probability_of_outcome(c, tensor(zero, tensor(zero, PureState::basis(1, 1))), "0") ==
        Approx(0.5).margin(1e-12));
  const auto rho = random_density_operator(3, 4, 2);
  Circuit full(3);
  full.add(Gate::hadamard(0)).add(Gate::unitary(random_unitary(4, 9), {2, 0})).measure({0, 1, 2});
  const auto dist = outcome_distribution(full, rho);
  double sum = 0.0;
  for (double p : dist) sum += p;
  CHECK(sum == Approx(1.0).margin(1e-10));
}

TEST_CASE("pure and density evolution agree with the full-matrix oracle") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto c = random_circuit(3, s, 8);
    const auto u = circuit_unitary(c);
    CHECK(max_abs(u - oracle::circuit_matrix(c)) < 1e-12);
    CHECK(max_abs(u.adjoint() * u - Matrix::Identity(8, 8)) < 1e-9);
    const auto rho = random_density_operator(3, 2, s);
    const auto out = evolve_exact(c, rho);
    CHECK(max_abs(out.matrix() - u * rho.matrix() * u.adjoint()) < 1e-12);
    CHECK(std::abs(out.matrix().trace() - 1.0) < 1e-9);
    const auto phi = random_pure_state(3, s);
    CHECK((evolve(c, phi).amplitudes() - u * phi.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("every built circuit is unitary") {
  for (int n = 1; n <= 2; ++n) {
    const auto u = circuit_unitary(build_estimation_network(n));
    CHECK(max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) < 1e-9);
  }
  const auto mono = circuit_unitary(build_purity_circuit(1, 2).monolithic_circuit());
  CHECK(max_abs(mono.adjoint() * mono - Matrix::Identity(mono.rows(), mono.cols())) < 1e-9);
  Circuit perm(3);
  perm.add(Gate::permutation({2, 0, 1})).add(Gate::controlled_swap(0, {1}, {2}));
  const auto pu = circuit_unitary(perm);
  CHECK(max_abs(pu - oracle::circuit_matrix(perm)) < 1e-15);
}

TEST_CASE("sample_shots frequency of 0 on the mixed E_1 case") {
  const auto c = build_estimation_network(1);
  const auto mm = DensityOperator::maximally_mixed(1);
  const auto input = tensor(DensityOperator::from_pure(PureState::zeros(1)), tensor(mm, mm));
  const std::uint64_t shots = 100000;
  const auto r = sample_shots(c, input, shots, 42);
  CHECK(r.shots == shots);
  const double f0 = static_cast<double>(r.outcomes.at("0")) / static_cast<double>(shots);
  CHECK(std::abs(f0 - 0.75) < 3.0 * oracle::binomial_sigma(0.75, static_cast<double>(shots)));
  CHECK(sample_shots(c, input, shots, 42) == r);
  CHECK_FALSE(sample_shots(c, input, shots, 43) == r);
}

TEST_CASE("sample_shots on a deterministic outcome") {
  const auto c = build_estimation_network(1);
  const auto phi = DensityOperator::from_pure(random_pure_state(1, 1));
  const auto input = tensor(DensityOperator::from_pure(PureState::zeros(1)), tensor(phi, phi));
  const auto r = sample_shots(c, input, 1000, 5);
  REQUIRE(r.outcomes.size() == 1);
  CHECK(r.outcomes.at("0") == 1000);
}

TEST_CASE("sampled frequencies lie in the 5 sigma band of every outcome") {
  const auto rho = random_density_operator(2, 4, 12);
  Circuit c(2);
  c.add(Gate::hadamard(0)).add(Gate::unitary(random_unitary(4, 3), {0, 1})).measure({0, 1});
  const auto dist = outcome_distribution(c, rho);
  const std::uint64_t shots = 100000;
  const auto r = sample_shots(c, rho, shots, 7);
  const char* names[] = {"00", "01", "10", "11"};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto it = r.outcomes.find(names[k]);
    const double f = it == r.outcomes.end() ? 0.0 : static_cast<double>(it->second) / shots;
    CHECK(std::abs(f - dist[k]) <= 5.0 * oracle::binomial_sigma(dist[k], static_cast<double>(shots)) + 1e-12);
  }
}

TEST_CASE("purity plan flag probabilities") {
  const auto pure = DensityOperator::from_pure(random_pure_state(2, 3));
  for (int m : {1, 5, 20}) CHECK(build_purity_circuit(2, m).flag_probability(pure) == Approx(1.0).margin(1e-12));
  const auto mm = DensityOperator::maximally_mixed(1);
  CHECK(build_purity_circuit(1, 20).flag_probability(mm) == Approx(std::pow(0.75, 20)).epsilon(1e-12));
  CHECK(std::pow(0.75, 20) == Approx(3.171211938e-3).epsilon(1e-9));
  const auto rho = random_density_operator(1, 2, 2);
  CHECK(build_purity_circuit(1, 1).flag_probability(rho) == Approx(swap_test_p0(rho, rho)).margin(1e-15));
}

TEST_CASE("factorized purity execution equals the monolithic circuit for m=1, M<=3") {
  for (int reps = 1; reps <= 3; ++reps)
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto rho = random_density_operator(1, 2, s + 20);
      const auto plan = build_purity_circuit(1, reps);
      const auto mono = plan.monolithic_circuit();
      CHECK(mono.num_qubits() == reps * 3 + 1);
      const double p_mono = probability_of_outcome(mono, plan.monolithic_input(rho), "1");
      CHECK(std::abs(p_mono - plan.flag_probability(rho)) < 1e-10);
      if (reps <= 2) {
        const Matrix u = oracle::circuit_matrix(mono);
        const Matrix out = u * plan.monolithic_input(rho).matrix() * u.adjoint();
        double p1 = 0.0;
        for (Eigen::Index i = 1; i < out.rows(); i += 2) p1 += out(i, i).real();
        CHECK(std::abs(p1 - plan.flag_probability(rho)) < 1e-10);
      }
    }
}

TEST_CASE("purity plan sampled runs stop at the first rejecting test") {
  const auto plan = build_purity_circuit(1, 10);
  std::uint64_t accepted = 0;
  const std::uint64_t runs = 20000;
  for (std::uint64_t r = 0; r < runs; ++r) {
    const auto [ok, tests] = plan.sample_run(0.75, 3, r);
    CHECK(tests >= 1);
    CHECK(tests <= 10);
    if (ok) {
      CHECK(tests == 10);
      ++accepted;
    }
  }
  const double p = std::pow(0.75, 10);
  CHECK(std::abs(static_cast<double>(accepted) / runs - p) < 5.0 * oracle::binomial_sigma(p, runs));
  CHECK(plan.sample_run(1.0, 3, 0) == std::pair<bool, int>{true, 10});
}

TEST_CASE("repetition count must be positive") {
  CHECK_THROWS_AS(build_purity_circuit(1, 0), Error);
}

TEST_CASE("subset_extract examples") {
  Vector plus(2);
  plus << std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0;
  const auto s = tensor(PureState::zeros(1), PureState(plus));
  Matrix zero = Matrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  CHECK(max_abs(subset_extract(s, "10").matrix() - zero) < 1e-15);
  CHECK(max_abs(subset_extract(bell(), "10").matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-15);
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto phi = random_pure_state(4, k);
    CHECK(max_abs(subset_extract(phi, "0110").matrix() -
                  oracle::ptrace(oracle::projector(phi.amplitudes()), 4, {1, 2})) < 1e-12);
    CHECK(max_abs(subset_extract(phi, "1001").matrix() -
                  oracle::ptrace(oracle::projector(phi.amplitudes()), 4, {0, 3})) < 1e-12);
  }
  CHECK_THROWS_AS(subset_extract(bell(), "11"), Error);
  CHECK_THROWS_AS(subset_extract(bell(), "100"), Error);
}

TEST_CASE("controlled reflection branches") {
  const auto phi = random_pure_state(2, 8);
  const auto g = controlled_reflection(phi);
  Circuit c(3);
  c.add(g);
  const auto zero = PureState::basis(1, 0);
  const auto one = PureState::basis(1, 1);
  const auto chi = random_pure_state(2, 9);
  CHECK((evolve(c, tensor(chi, zero)).amplitudes() - tensor(chi, zero).amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((evolve(c, tensor(phi, one)).amplitudes() - tensor(phi, one).amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  Vector perp = chi.amplitudes() - inner_product(phi, chi) * phi.amplitudes();
  const auto psi = PureState::normalized(perp);
  CHECK((evolve(c, tensor(psi, one)).amplitudes() + tensor(psi, one).amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("raw unitary payloads must be unitary") {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = 1.1;
  CHECK_THROWS_AS(Gate::unitary(bad, {0}), Error);
  CHECK_THROWS_AS(Gate::unitary(Matrix::Identity(4, 4), {0}), Error);
  Circuit c(2);
  CHECK_THROWS_AS(c.add(Gate::hadamard(2)), Error);
  CHECK_THROWS_AS(Circuit(15), Error);
}

TEST_CASE("circuit text round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "qlang_circuit_test";
  std::filesystem::create_directories(dir);
  Circuit c(3);
  c.add(Gate::hadamard(0))
      .add(Gate::pauli_x(2))
      .add(Gate::controlled_swap(0, {1}, {2}))
      .add(Gate::toffoli({0, 1}, 2))
      .add(Gate::permutation({1, 2, 0}))
      .add(Gate::unitary(random_unitary(4, 5), {2, 0}))
      .measure({0, 2});
  save_circuit(c, dir / "c.txt");
  const auto back = load_circuit(dir / "c.txt");
  CHECK(back.num_qubits() == 3);
  CHECK(back.gates().size() == c.gates().size());
  CHECK(back.measured() == c.measured());
  CHECK(max_abs(circuit_unitary(back) - circuit_unitary(c)) < 1e-14);
}

TEST_CASE("circuit text parsing and errors") {
  const auto c = parse_circuit("qubits 2\n# comment\nH q0\nX 1 ; H q1\nMEASURE q0 q1\n");
  CHECK(c.gates().size() == 3);
  CHECK(c.measured().size() == 2);
  CHECK_THROWS_AS(parse_circuit("H q0\n"), Error);
  CHECK_THROWS_AS(parse_circuit("qubits 2\nFOO q0\n"), Error);
  CHECK_THROWS_AS(parse_circuit("qubits 2\nH q5\n"), Error);
  try {
    parse_circuit("qubits 2\nH q0\nH q9\n");
    FAIL("expected a format error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Format);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}
