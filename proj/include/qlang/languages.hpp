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

// Exact membership oracles for the quantum languages and the partial
// decision region map (accept, reject, or the illegal gap of width epsilon).

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "qlang/circuit.hpp"
#include "qlang/io.hpp"
#include "qlang/qstate.hpp"

namespace qlang {

enum class LanguageId { L1, L2, L3, L4, L5, L3Classical };

const char* to_string(LanguageId id) noexcept;
LanguageId parse_language(std::string_view name);

/// Explicit table for the prefix-length function of L1; every entry must
/// satisfy 1 <= f(n) <= n.
class PrefixFunction {
 public:
  PrefixFunction() = default;
  explicit PrefixFunction(std::map<int, int> table);
  static PrefixFunction constant(int prefix, int max_n = kDefaultMaxQubits);

  int operator()(int n) const;

 private:
  std::map<int, int> table_;
};

struct Membership {
  bool member = false;
  /// Language-specific distance proxy: 0 on members.
  double margin = 0.0;
  std::optional<Bipartition> cut;
};

/// Purity of the first f_n qubits; margin = 1 - purity.
Membership member_L1(const PureState& phi, int prefix);
/// Product across some bipartition; brute force over all 2^(n-1)-1 cuts.
/// Margin = min over cuts of (1 - largest Schmidt coefficient).
Membership member_L2(const PureState& phi);
/// Entangled across `cut`; margin = negativity (mixed) or
/// 1 - largest Schmidt coefficient (pure).
Membership member_L3(const DensityOperator& rho, const Bipartition& cut);
/// True iff U|0...0> is not a tensor product of single-qubit states.
bool member_L3_classical(const Circuit& u);
bool member_L3_classical(std::string_view circuit_text, const std::filesystem::path& base_dir = {});

/// True iff phi factors completely into single-qubit states, found by
/// recursively splitting along product cuts.
bool is_fully_product(const PureState& phi);

enum class Region { Accept, Reject, Illegal };
const char* to_string(Region r) noexcept;

struct RegionVerdict {
  Region region;
  double margin;
};

struct ClassifyParams {
  PrefixFunction prefix;               // L1
  std::optional<Bipartition> cut;      // L3, defaults to {0} | rest
};

/// Accept on members, Reject when margin >= epsilon, Illegal otherwise.
/// Defined for L1, L2 and L3 only.
RegionVerdict classify(LanguageId language, const StateVariant& state, double epsilon,
                       const ClassifyParams& params = {});

inline constexpr int kMaxL2Qubits = 10;

}  // namespace qlang
