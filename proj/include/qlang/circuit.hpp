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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qlang/qstate.hpp"

namespace qlang {

enum class GateKind {
  Hadamard,
  PauliX,
  ControlledSwapBlock,
  ToffoliType,
  QubitPermutation,
  RawUnitary,
};

const char* to_string(GateKind kind) noexcept;

/// One circuit element. Target layouts by kind:
///   Hadamard, PauliX       [q]
///   ControlledSwapBlock    [control, a_0..a_(k-1), b_0..b_(k-1)]
///   ToffoliType            [c_0..c_(m-1), target]   flips target when all c are 1
///   QubitPermutation       [p_0..p_(n-1)]           output qubit j carries input p_j
///   RawUnitary             [q_0..q_(k-1)]           payload indexed with q_0 as MSB
class Gate {
 public:
  static Gate hadamard(int qubit);
  static Gate pauli_x(int qubit);
  static Gate controlled_swap(int control, std::vector<int> register_a, std::vector<int> register_b);
  static Gate toffoli(std::vector<int> controls, int target);
  static Gate permutation(std::vector<int> order);
  static Gate unitary(Matrix payload, std::vector<int> targets);

  GateKind kind() const noexcept { return kind_; }
  const std::vector<int>& targets() const noexcept { return targets_; }
  const Matrix& payload() const noexcept { return payload_; }

  /// Throws when a target is out of range for an n-qubit circuit.
  void check_fits(int num_qubits) const;

 private:
  Gate(GateKind kind, std::vector<int> targets, Matrix payload = {});

  GateKind kind_;
  std::vector<int> targets_;
  Matrix payload_;
};

class Circuit {
 public:
  explicit Circuit(int num_qubits);

  Circuit& add(Gate gate);
  Circuit& measure(std::vector<int> qubits);

  int num_qubits() const noexcept { return num_qubits_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  const std::vector<int>& measured() const noexcept { return measured_; }

 private:
  int num_qubits_;
  std::vector<Gate> gates_;
  std::vector<int> measured_;
};

struct ShotResult {
  std::map<std::string, std::uint64_t> outcomes;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ShotResult&, const ShotResult&) = default;
};

void apply_gate(const Gate& gate, int num_qubits, Vector& state);
void apply_gate(const Gate& gate, int num_qubits, Matrix& rho);

PureState evolve(const Circuit& c, const PureState& input);
DensityOperator evolve_exact(const Circuit& c, const DensityOperator& input);
/// Full unitary of the circuit, columns are images of basis states.
Matrix circuit_unitary(const Circuit& c);

/// Born-rule distribution over the measured qubits; index bit order follows
/// c.measured() with the first measured qubit as the most significant bit.
std::vector<double> outcome_distribution(const Circuit& c, const DensityOperator& input);
std::vector<double> outcome_distribution(const Circuit& c, const PureState& input);
double probability_of_outcome(const Circuit& c, const DensityOperator& input, std::string_view bits);
double probability_of_outcome(const Circuit& c, const PureState& input, std::string_view bits);

/// Draws from a discrete distribution by inverse CDF.
class OutcomeSampler {
 public:
  explicit OutcomeSampler(std::vector<double> probabilities);
  std::size_t draw(double uniform) const noexcept;
  std::size_t size() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

ShotResult sample_shots(const Circuit& c, const DensityOperator& input, std::uint64_t shots,
                        std::uint64_t seed);

/// Swap-test network on 2n+1 qubits: qubit 0 is the control, qubits 1..n the
/// first register and n+1..2n the second. Measures the control.
Circuit build_estimation_network(int n);

/// Exact P(control = 0) of the estimation network on |0><0| (x) a (x) b.
double swap_test_p0(const DensityOperator& a, const DensityOperator& b);
double swap_test_p0(const PureState& a, const PureState& b);

/// Execution plan for the repeated purity circuit: M disjoint estimation
/// networks whose control outcomes are negated and AND-ed into one flag.
/// Execution factorizes over the copies; the monolithic circuit is kept for
/// regression at tiny sizes.
class PurityPlan {
 public:
  PurityPlan(int register_size, int repetitions);

  int register_size() const noexcept { return m_; }
  int repetitions() const noexcept { return reps_; }
  const Circuit& estimation_network() const noexcept { return network_; }

  /// Exact single-copy control statistic P0 on rho (x) rho.
  double control_p0(const DensityOperator& rho) const;
  /// Exact probability that the flag reads 1, i.e. P0^M.
  double flag_probability(const DensityOperator& rho) const;

  /// One protocol run: draws control outcomes until the first 1 (reject) or M
  /// zeros (accept). Returns {accepted, swap tests performed}.
  std::pair<bool, int> sample_run(double p0, std::uint64_t seed, std::uint64_t run_index) const;

  /// Monolithic circuit on M(2m+1)+1 qubits; last qubit is the flag.
  Circuit monolithic_circuit() const;
  /// Input of the monolithic circuit: (|0><0| (x) rho (x) rho)^(x)M (x) |0><0|.
  DensityOperator monolithic_input(const DensityOperator& rho) const;

 private:
  int m_;
  int reps_;
  Circuit network_;
};

PurityPlan build_purity_circuit(int register_size, int repetitions);

/// Moves the qubits marked '1' in S to the front and traces out the rest.
DensityOperator subset_extract(const PureState& phi, std::string_view subset);
/// The permutation gate used by subset_extract.
Gate subset_permutation(std::string_view subset);

/// Block unitary on k+1 qubits, identity on control 0 and `u` on control 1.
/// The control is the last qubit.
Matrix controlled_block(const Matrix& u);

/// 2|phi><phi| - I on the register, controlled by an extra last qubit.
Gate controlled_reflection(const PureState& phi);
Matrix reflection_matrix(const PureState& phi);

// Text format, one gate per line:
//   qubits N
//   H q0 | X q0 | CSWAP q0 | q1 q2 | q3 q4 | TOFFOLI q0 q1 | q2
//   PERM 2 0 1 | UNITARY <file> [q...] | MEASURE q...
// `#` starts a comment. Unitary files are resolved against `base_dir`.
Circuit parse_circuit(std::string_view text, const std::filesystem::path& base_dir = {});
Circuit load_circuit(const std::filesystem::path& path);
/// Writes the circuit; RawUnitary payloads go to sibling files
/// `<stem>.u<k>.txt` referenced by relative name.
void save_circuit(const Circuit& c, const std::filesystem::path& path);

}  // namespace qlang
