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

// Arthur (verifier) procedures and Merlin (prover) strategies for the five
// quantum languages. Every verifier runs in an exact oracle mode and, when
// shots > 0, a sampled mode drawing measurement outcomes of the estimation
// network.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qlang/circuit.hpp"
#include "qlang/qstate.hpp"

namespace qlang {

struct Thresholds {
  double completeness = 2.0 / 3.0;
  double soundness = 1.0 / 3.0;

  /// Acceptance cut applied to the decision statistic.
  double decision_cut() const noexcept { return 0.5 * (completeness + soundness); }
};

struct ProtocolOptions {
  /// Swap-test repetitions (L1, L2) or probe count (L4, L5).
  int repetitions = 1;
  /// 0 selects exact mode.
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  Thresholds thresholds;
  /// Exact-mode tolerance for the reflection and checker tests.
  double tolerance = 1e-6;
  /// Random product states in the witness validity panel.
  std::size_t panel_size = 200;
};

struct Statistic {
  std::string name;
  double value;
};

struct Verdict {
  std::string protocol;
  bool accepted = false;
  double exact_accept_prob = 0.0;
  std::optional<double> sampled_accept_freq;
  int repetitions = 0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::uint64_t copies_consumed = 0;
  std::uint64_t copy_budget = 0;
  std::vector<Statistic> transcript;

  /// Value of the first transcript entry with this name.
  std::optional<double> statistic(std::string_view name) const;
};

struct SubsetString {
  std::string bits;
};

struct WitnessDecomposition {
  std::vector<WeightedState> terms;
};

/// Merlin's message. size_bound is the description length: bits of a subset
/// string, terms of a witness, gates of a circuit.
struct Certificate {
  std::variant<SubsetString, WitnessDecomposition, Circuit> body;
  std::size_t size_bound = 0;

  static Certificate of(SubsetString s);
  static Certificate of(WitnessDecomposition w);
  static Certificate of(Circuit c);
};

enum class StrategyMode {
  Honest,
  Identity,
  OtherReflection,    // R_psi with |<psi|phi>|^2 = parameter
  ComplementPhase,    // |phi><phi| + e^{i parameter} (I - |phi><phi|)
  ComplementUnitary,  // |phi><phi| + Haar unitary on the orthogonal complement
  HaarRandom,
  GlobalPhase,        // e^{i parameter} R_phi
};

struct MerlinStrategy {
  StrategyMode mode = StrategyMode::Honest;
  double parameter = 0.0;

  /// "honest", "identity", "other-reflection:0.9", "complement-phase:1.57",
  /// "complement-unitary", "haar", "global-phase:0.7".
  std::string tag() const;
  static MerlinStrategy parse(std::string_view tag);
  /// False only for strategies that implement R_phi up to a global phase.
  bool is_cheat() const noexcept;
};

// L1: purity of a prefix.
Verdict verify_purity(const DensityOperator& rho, const ProtocolOptions& opts);
Verdict verify_L1(const PureState& phi, int prefix, const ProtocolOptions& opts);

// L2: separability with a subset-string certificate.
SubsetString merlin_L2_honest(const PureState& phi);
Verdict verify_L2(const PureState& phi, const SubsetString& cert, const ProtocolOptions& opts);

// L3: entanglement with a witness certificate.
WitnessDecomposition merlin_L3_honest(const DensityOperator& rho, const Bipartition& cut);
Verdict verify_L3(const DensityOperator& rho, const WitnessDecomposition& cert,
                  const ProtocolOptions& opts);
/// Computational-basis states followed by `random_count` fully product states.
std::vector<PureState> validity_panel(int num_qubits, std::size_t random_count, std::uint64_t seed);

// L4: easy reflection with a circuit certificate.
Verdict verify_L4(const PureState& phi, const Circuit& cert, const ProtocolOptions& opts);
std::vector<MerlinStrategy> merlin_L4_cheat_library();
Circuit reflection_certificate(const MerlinStrategy& strategy, const PureState& phi,
                               std::uint64_t seed);

// L5: checkable states.
/// (I (x) H) ctrl-R_phi (I (x) H) on n+1 qubits; the flag is the last qubit.
Circuit build_checker_from_reflection(const PureState& phi);
/// The same composition with ctrl-N for a certificate network N.
Circuit build_checker(const Circuit& reflection);
Verdict verify_L5(const PureState& phi, const Circuit& cert, const ProtocolOptions& opts);

/// Smallest M >= 1 with exp(-2 M (gap/2)^2) <= error_bound.
std::uint64_t required_repetitions(double gap, double error_bound);

}  // namespace qlang
