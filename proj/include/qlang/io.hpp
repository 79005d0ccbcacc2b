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

// Text file formats for states, matrices, subset strings and witnesses.
//
//   qlang-state 1
//   qubits <n>
//   kind pure|density|unitary
//   <re> <im>            one line per entry, row-major for matrices
//
// Blank lines and text after '#' are ignored.

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qlang/qstate.hpp"

namespace qlang {

using StateVariant = std::variant<PureState, DensityOperator>;

inline constexpr int kStateFormatVersion = 1;
/// Norm, trace and Hermiticity slack accepted on load; values are then
/// renormalized to the constructor tolerance.
inline constexpr double kFileTolerance = 1e-8;

int num_qubits(const StateVariant& state) noexcept;
DensityOperator to_density(const StateVariant& state);

StateVariant parse_state(std::string_view text);
StateVariant load_state(const std::filesystem::path& path);
std::string serialize_state(const StateVariant& state);
void save_state(const StateVariant& state, const std::filesystem::path& path);

Matrix parse_unitary(std::string_view text);
Matrix load_unitary(const std::filesystem::path& path);
std::string serialize_unitary(const Matrix& u);

/// First non-comment line, whitespace trimmed; must be a 0/1 string.
std::string parse_subset_string(std::string_view text);
std::string load_subset_string(const std::filesystem::path& path);

/// {"coeffs": [c_1, ...], "states": ["rho1.txt", ...]}; state paths are
/// resolved against `base_dir`.
std::vector<WeightedState> parse_witness(std::string_view json_text,
                                         const std::filesystem::path& base_dir);
std::vector<WeightedState> load_witness(const std::filesystem::path& path);
/// Writes the JSON file plus `<stem>.rho<k>.txt` siblings.
void save_witness(const std::vector<WeightedState>& terms, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// Shortest-exact ("%.17g") decimal rendering.
std::string format_double(double value);

}  // namespace qlang
