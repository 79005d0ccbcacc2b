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

#include "qlang/languages.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "qlang/error.hpp"

namespace qlang {

const char* to_string(LanguageId id) noexcept {
  switch (id) {
    case LanguageId::L1: return "L1";
    case LanguageId::L2: return "L2";
    case LanguageId::L3: return "L3";
    case LanguageId::L4: return "L4";
    case LanguageId::L5: return "L5";
    case LanguageId::L3Classical: return "L3classical";
  }
  return "?";
}

LanguageId parse_language(std::string_view name) {
  for (auto id : {LanguageId::L1, LanguageId::L2, LanguageId::L3, LanguageId::L4, LanguageId::L5,
                  LanguageId::L3Classical})
    if (name == to_string(id)) return id;
  fail(ErrorKind::Argument, "unknown language '" + std::string(name) + "'");
}

const char* to_string(Region r) noexcept {
  switch (r) {
    case Region::Accept: return "Accept";
    case Region::Reject: return "Reject";
    case Region::Illegal: return "Illegal";
  }
  return "?";
}

PrefixFunction::PrefixFunction(std::map<int, int> table) : table_(std::move(table)) {
  for (const auto& [n, f] : table_)
    require(n >= 1 && f >= 1 && f <= n, ErrorKind::Argument,
            "prefix table entry f(" + std::to_string(n) + ") = " + std::to_string(f) +
                " violates 1 <= f(n) <= n");
}

PrefixFunction PrefixFunction::constant(int prefix, int max_n) {
  std::map<int, int> table;
  for (int n = std::max(prefix, 1); n <= max_n; ++n) table[n] = prefix;
  return PrefixFunction(std::move(table));
}

int PrefixFunction::operator()(int n) const {
  const auto it = table_.find(n);
  require(it != table_.end(), ErrorKind::Argument,
          "prefix function has no entry for n = " + std::to_string(n));
  return it->second;
}

namespace {

std::vector<int> first_qubits(int k) {
  std::vector<int> q(static_cast<std::size_t>(k));
  std::iota(q.begin(), q.end(), 0);
  return q;
}

constexpr double kPurityTolerance = 1e-9;

}  // namespace

Membership member_L1(const PureState& phi, int prefix) {
  require(prefix >= 1 && prefix <= phi.num_qubits(), ErrorKind::Argument,
          "prefix length " + std::to_string(prefix) + " outside [1, " +
              std::to_string(phi.num_qubits()) + "]");
  const double p = purity(partial_trace(phi, first_qubits(prefix)));
  return {p >= 1.0 - kPurityTolerance, std::max(0.0, 1.0 - p), std::nullopt};
}

Membership member_L2(const PureState& phi) {
  const int n = phi.num_qubits();
  require(n >= 2, ErrorKind::Argument, "L2 needs at least two qubits");
  require(n <= kMaxL2Qubits, ErrorKind::Resource,
          "L2 brute force limited to " + std::to_string(kMaxL2Qubits) + " qubits");
  Membership best;
  best.margin = std::numeric_limits<double>::infinity();
  // Qubit 0 always sits in subset A, so each unordered cut is visited once.
  const std::size_t cuts = dimension_of(n - 1);
  for (std::size_t mask = 1; mask < cuts; ++mask) {
    std::vector<int> a{0};
    for (int q = 1; q < n; ++q)
      if (!((mask >> (n - 1 - q)) & 1U)) a.push_back(q);
    const auto cut = Bipartition::from_subset(n, std::move(a));
    const auto spectrum = schmidt_spectrum(phi, cut);
    const double margin = 1.0 - spectrum.largest();
    if (margin < best.margin) {
      best.margin = margin;
      best.member = spectrum.is_product();
      best.cut = cut;
    }
  }
  best.margin = std::max(0.0, best.margin);
  return best;
}

Membership member_L3(const DensityOperator& rho, const Bipartition& cut) {
  const auto sep = is_separable_oracle(rho, cut);
  return {!sep.separable, sep.margin, cut};
}

bool is_fully_product(const PureState& phi) {
  const int n = phi.num_qubits();
  if (n == 1) return true;
  const std::size_t cuts = dimension_of(n - 1);
  for (std::size_t mask = 1; mask < cuts; ++mask) {
    std::vector<int> a{0};
    for (int q = 1; q < n; ++q)
      if (!((mask >> (n - 1 - q)) & 1U)) a.push_back(q);
    const auto cut = Bipartition::from_subset(n, std::move(a));
    const auto dec = schmidt_decompose(phi, cut);
    if (!dec.spectrum.is_product()) continue;
    // Any product cut works: full factorization is unique, so recursing on
    // the two factors along one cut decides the question.
    return is_fully_product(PureState::normalized(dec.left.col(0))) &&
           is_fully_product(PureState::normalized(dec.right.col(0)));
  }
  return false;
}

bool member_L3_classical(const Circuit& u) {
  require(u.num_qubits() <= kMaxL2Qubits, ErrorKind::Resource,
          "classical bridge limited to " + std::to_string(kMaxL2Qubits) + " qubits");
  const auto out = evolve(u, PureState::zeros(u.num_qubits()));
  return !is_fully_product(out);
}

bool member_L3_classical(std::string_view circuit_text, const std::filesystem::path& base_dir) {
  return member_L3_classical(parse_circuit(circuit_text, base_dir));
}

namespace {

PureState require_pure(const StateVariant& state, LanguageId language) {
  if (const auto* pure = std::get_if<PureState>(&state)) return *pure;
  auto vec = as_pure(std::get<DensityOperator>(state));
  require(vec.has_value(), ErrorKind::Argument,
          std::string(to_string(language)) + " is a language of pure states");
  return *vec;
}

}  // namespace

RegionVerdict classify(LanguageId language, const StateVariant& state, double epsilon,
                       const ClassifyParams& params) {
  require(epsilon > 0.0 && epsilon < 1.0, ErrorKind::Argument, "epsilon must lie in (0, 1)");
  Membership m;
  switch (language) {
    case LanguageId::L1: {
      const auto phi = require_pure(state, language);
      m = member_L1(phi, params.prefix(phi.num_qubits()));
      break;
    }
    case LanguageId::L2:
      m = member_L2(require_pure(state, language));
      break;
    case LanguageId::L3: {
      const int n = num_qubits(state);
      const auto cut = params.cut ? *params.cut : Bipartition::from_subset(n, {0});
      m = member_L3(to_density(state), cut);
      break;
    }
    default:
      fail(ErrorKind::Argument, std::string("no metric classification for ") + to_string(language));
  }
  if (m.member) return {Region::Accept, m.margin};
  if (m.margin >= epsilon) return {Region::Reject, m.margin};
  return {Region::Illegal, m.margin};
}

}  // namespace qlang
