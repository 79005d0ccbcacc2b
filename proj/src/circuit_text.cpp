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

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qlang/circuit.hpp"
#include "qlang/error.hpp"
#include "qlang/io.hpp"

namespace qlang {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& message) {
  fail(ErrorKind::Format, "circuit line " + std::to_string(line) + ": " + message);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  return s;
}

int parse_qubit(const std::string& token, std::size_t line) {
  std::string digits = token;
  if (!digits.empty() && (digits[0] == 'q' || digits[0] == 'Q')) digits.erase(0, 1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                     [](unsigned char ch) { return std::isdigit(ch) != 0; }))
    parse_error(line, "bad qubit token '" + token + "'");
  if (digits.size() > 6) parse_error(line, "qubit index '" + token + "' too large");
  return std::stoi(digits);
}

// Splits the operand tokens on '|' into groups of qubit indices.
std::vector<std::vector<int>> qubit_groups(const std::vector<std::string>& tokens, std::size_t line) {
  std::vector<std::vector<int>> groups(1);
  for (const auto& t : tokens) {
    if (t == "|") {
      groups.emplace_back();
    } else {
      groups.back().push_back(parse_qubit(t, line));
    }
  }
  return groups;
}

std::vector<int> single_group(const std::vector<std::string>& tokens, std::size_t line) {
  auto groups = qubit_groups(tokens, line);
  if (groups.size() != 1) parse_error(line, "unexpected '|'");
  return groups.front();
}

std::string qubit_list(const std::vector<int>& qs) {
  std::string s;
  for (int q : qs) {
    if (!s.empty()) s += ' ';
    s += 'q' + std::to_string(q);
  }
  return s;
}

}  // namespace

Circuit parse_circuit(std::string_view text, const std::filesystem::path& base_dir) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  std::optional<Circuit> circuit;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream statements(raw);
    for (std::string statement; std::getline(statements, statement, ';');) {
      // '|' may be written without spaces.
      std::string spaced;
      for (char ch : statement) {
        if (ch == '|') spaced += " | ";
        else spaced += ch;
      }
      std::istringstream fields(spaced);
      std::string op;
      if (!(fields >> op)) continue;
      std::vector<std::string> args;
      for (std::string a; fields >> a;) args.push_back(a);
      op = upper(op);

      if (!circuit) {
        if (op != "QUBITS" || args.size() != 1) parse_error(line_no, "expected 'qubits <n>' first");
        int n = 0;
        try {
          n = std::stoi(args[0]);
        } catch (const std::exception&) {
          parse_error(line_no, "bad qubit count '" + args[0] + "'");
        }
        try {
          circuit.emplace(n);
        } catch (const Error& e) {
          throw Error(e.kind(), "circuit line " + std::to_string(line_no) + ": " + e.what());
        }
        continue;
      }

      try {
        if (op == "H" || op == "X") {
          const auto qs = single_group(args, line_no);
          if (qs.size() != 1) parse_error(line_no, op + " takes exactly one qubit");
          circuit->add(op == "H" ? Gate::hadamard(qs[0]) : Gate::pauli_x(qs[0]));
        } else if (op == "CSWAP") {
          const auto g = qubit_groups(args, line_no);
          if (g.size() != 3 || g[0].size() != 1)
            parse_error(line_no, "CSWAP expects 'c | a... | b...'");
          circuit->add(Gate::controlled_swap(g[0][0], g[1], g[2]));
        } else if (op == "TOFFOLI") {
          const auto g = qubit_groups(args, line_no);
          if (g.size() != 2 || g[0].empty() || g[1].size() != 1)
            parse_error(line_no, "TOFFOLI expects 'c... | t'");
          circuit->add(Gate::toffoli(g[0], g[1][0]));
        } else if (op == "PERM") {
          circuit->add(Gate::permutation(single_group(args, line_no)));
        } else if (op == "UNITARY") {
          if (args.empty()) parse_error(line_no, "UNITARY needs a file");
          const Matrix u = load_unitary(base_dir / args[0]);
          std::vector<std::string> rest(args.begin() + 1, args.end());
          std::vector<int> targets = single_group(rest, line_no);
          if (targets.empty()) {
            for (int q = 0; q < circuit->num_qubits(); ++q) targets.push_back(q);
          }
          circuit->add(Gate::unitary(u, std::move(targets)));
        } else if (op == "MEASURE") {
          circuit->measure(single_group(args, line_no));
        } else {
          parse_error(line_no, "unknown gate '" + op + "'");
        }
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Format) throw;
        throw Error(ErrorKind::Format, "circuit line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  if (!circuit) fail(ErrorKind::Format, "circuit has no 'qubits <n>' header");
  return std::move(*circuit);
}

Circuit load_circuit(const std::filesystem::path& path) {
  return parse_circuit(read_text_file(path), path.parent_path());
}

void save_circuit(const Circuit& c, const std::filesystem::path& path) {
  std::string out = "qubits " + std::to_string(c.num_qubits()) + "\n";
  int unitary_index = 0;
  for (const auto& g : c.gates()) {
    const auto& t = g.targets();
    switch (g.kind()) {
      case GateKind::Hadamard:
      case GateKind::PauliX:
        out += std::string(to_string(g.kind())) + " " + qubit_list(t) + "\n";
        break;
      case GateKind::ControlledSwapBlock: {
        const std::size_t k = (t.size() - 1) / 2;
        out += "CSWAP q" + std::to_string(t[0]) + " | " +
               qubit_list({t.begin() + 1, t.begin() + 1 + static_cast<std::ptrdiff_t>(k)}) + " | " +
               qubit_list({t.begin() + 1 + static_cast<std::ptrdiff_t>(k), t.end()}) + "\n";
        break;
      }
      case GateKind::ToffoliType:
        out += "TOFFOLI " + qubit_list({t.begin(), t.end() - 1}) + " | q" + std::to_string(t.back()) + "\n";
        break;
      case GateKind::QubitPermutation: {
        out += "PERM";
        for (int q : t) out += " " + std::to_string(q);
        out += "\n";
        break;
      }
      case GateKind::RawUnitary: {
        const std::string name =
            path.stem().string() + ".u" + std::to_string(unitary_index++) + ".txt";
        write_text_file(path.parent_path() / name, serialize_unitary(g.payload()));
        out += "UNITARY " + name + " " + qubit_list(t) + "\n";
        break;
      }
    }
  }
  if (!c.measured().empty()) out += "MEASURE " + qubit_list(c.measured()) + "\n";
  write_text_file(path, out);
}

}  // namespace qlang
