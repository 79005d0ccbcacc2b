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

#include "qlang/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qlang/error.hpp"

namespace qlang {

namespace {

enum class EntryKind { Pure, Density, Unitary };

struct RawFile {
  int num_qubits = 0;
  EntryKind kind = EntryKind::Pure;
  std::vector<Complex> entries;
};

std::string_view strip_comment(std::string_view line) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  const auto first = line.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = line.find_last_not_of(" \t\r");
  return line.substr(first, last - first + 1);
}

[[noreturn]] void format_error(std::size_t line, const std::string& message) {
  fail(ErrorKind::Format, "line " + std::to_string(line) + ": " + message);
}

RawFile parse_raw(std::string_view text) {
  RawFile raw;
  std::istringstream in{std::string(text)};
  std::string line_buf;
  std::size_t line_no = 0;
  int header = 0;
  std::size_t expected = 0;
  while (std::getline(in, line_buf)) {
    ++line_no;
    const auto line = strip_comment(line_buf);
    if (line.empty()) continue;
    std::istringstream fields{std::string(line)};
    if (header == 0) {
      std::string magic;
      int version = 0;
      fields >> magic >> version;
      if (magic != "qlang-state") format_error(line_no, "expected 'qlang-state <version>' header");
      if (version != kStateFormatVersion)
        format_error(line_no, "unsupported format version " + std::to_string(version));
      ++header;
    } else if (header == 1) {
      std::string key;
      fields >> key >> raw.num_qubits;
      if (key != "qubits" || fields.fail()) format_error(line_no, "expected 'qubits <n>'");
      if (raw.num_qubits < 1) format_error(line_no, "qubit count " + std::to_string(raw.num_qubits) + " out of range");
      require(raw.num_qubits <= kDefaultMaxQubits, ErrorKind::Resource,
              "line " + std::to_string(line_no) + ": " + std::to_string(raw.num_qubits) +
                  " qubits exceed the limit of " + std::to_string(kDefaultMaxQubits));
      ++header;
    } else if (header == 2) {
      std::string key;
      std::string kind;
      fields >> key >> kind;
      if (key != "kind") format_error(line_no, "expected 'kind pure|density|unitary'");
      if (kind == "pure") {
        raw.kind = EntryKind::Pure;
        expected = dimension_of(raw.num_qubits);
      } else if (kind == "density" || kind == "unitary") {
        raw.kind = kind == "density" ? EntryKind::Density : EntryKind::Unitary;
        expected = dimension_of(raw.num_qubits) * dimension_of(raw.num_qubits);
      } else {
        format_error(line_no, "unknown kind '" + kind + "'");
      }
      raw.entries.reserve(expected);
      ++header;
    } else {
      double re = 0.0;
      double im = 0.0;
      std::string extra;
      fields >> re >> im;
      if (fields.fail()) format_error(line_no, "expected '<re> <im>'");
      if (fields >> extra) format_error(line_no, "unexpected trailing field '" + extra + "'");
      if (!std::isfinite(re) || !std::isfinite(im)) format_error(line_no, "non-finite entry");
      if (raw.entries.size() == expected) format_error(line_no, "too many entries");
      raw.entries.emplace_back(re, im);
    }
  }
  if (header < 3) format_error(line_no, "incomplete header");
  if (raw.entries.size() != expected)
    format_error(line_no, "expected " + std::to_string(expected) + " entries, found " +
                              std::to_string(raw.entries.size()));
  return raw;
}

Matrix entries_as_matrix(const RawFile& raw) {
  const auto d = static_cast<Eigen::Index>(dimension_of(raw.num_qubits));
  Matrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = raw.entries[static_cast<std::size_t>(r * d + c)];
  return m;
}

const char* header_kind(EntryKind kind) {
  switch (kind) {
    case EntryKind::Pure: return "pure";
    case EntryKind::Density: return "density";
    case EntryKind::Unitary: return "unitary";
  }
  return "";
}

std::string write_header(int n, EntryKind kind) {
  return "qlang-state " + std::to_string(kStateFormatVersion) + "\nqubits " + std::to_string(n) +
         "\nkind " + header_kind(kind) + "\n";
}

void append_entry(std::string& out, Complex z) {
  out += format_double(z.real());
  out += ' ';
  out += format_double(z.imag());
  out += '\n';
}

std::string serialize_matrix(const Matrix& m, EntryKind kind) {
  std::string out = write_header(qubits_for_dimension(static_cast<std::size_t>(m.rows())), kind);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) append_entry(out, m(r, c));
  return out;
}

std::string measured(double v) { return format_double(v); }

DensityOperator validated_density(Matrix m) {
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  require(defect <= kFileTolerance, ErrorKind::Format,
          "density operator not Hermitian (defect " + measured(defect) + ")");
  m = 0.5 * (m + m.adjoint());
  const double tr = m.trace().real();
  require(std::abs(tr - 1.0) <= kFileTolerance, ErrorKind::Format,
          "density operator trace " + measured(tr) + " differs from 1");
  m /= tr;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  const double lowest = eig.eigenvalues().minCoeff();
  require(lowest >= -kFileTolerance, ErrorKind::Format,
          "density operator has negative eigenvalue " + measured(lowest));
  if (lowest < -kValidationTolerance) {
    const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
    m = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().adjoint();
    m /= m.trace().real();
    m = 0.5 * (m + m.adjoint());
  }
  return DensityOperator(std::move(m));
}

}  // namespace

std::string format_double(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

int num_qubits(const StateVariant& state) noexcept {
  return std::visit([](const auto& s) { return s.num_qubits(); }, state);
}

DensityOperator to_density(const StateVariant& state) {
  if (const auto* pure = std::get_if<PureState>(&state)) return DensityOperator::from_pure(*pure);
  return std::get<DensityOperator>(state);
}

StateVariant parse_state(std::string_view text) {
  const RawFile raw = parse_raw(text);
  switch (raw.kind) {
    case EntryKind::Pure: {
      Vector v(static_cast<Eigen::Index>(raw.entries.size()));
      for (std::size_t i = 0; i < raw.entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = raw.entries[i];
      const double norm = v.norm();
      require(std::abs(norm - 1.0) <= kFileTolerance, ErrorKind::Format,
              "state norm " + measured(norm) + " differs from 1");
      return PureState::normalized(std::move(v));
    }
    case EntryKind::Density:
      return validated_density(entries_as_matrix(raw));
    case EntryKind::Unitary:
      fail(ErrorKind::Format, "file holds a unitary, expected a state");
  }
  fail(ErrorKind::Format, "unreachable");
}

StateVariant load_state(const std::filesystem::path& path) {
  try {
    return parse_state(read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string serialize_state(const StateVariant& state) {
  if (const auto* pure = std::get_if<PureState>(&state)) {
    std::string out = write_header(pure->num_qubits(), EntryKind::Pure);
    for (Eigen::Index i = 0; i < pure->amplitudes().size(); ++i) append_entry(out, pure->amplitudes()(i));
    return out;
  }
  return serialize_matrix(std::get<DensityOperator>(state).matrix(), EntryKind::Density);
}

void save_state(const StateVariant& state, const std::filesystem::path& path) {
  write_text_file(path, serialize_state(state));
}

Matrix parse_unitary(std::string_view text) {
  const RawFile raw = parse_raw(text);
  require(raw.kind == EntryKind::Unitary, ErrorKind::Format, "expected 'kind unitary'");
  Matrix u = entries_as_matrix(raw);
  const auto d = u.rows();
  const double defect = (u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  require(defect <= kFileTolerance, ErrorKind::Format,
          "matrix is not unitary (defect " + measured(defect) + ")");
  return u;
}

Matrix load_unitary(const std::filesystem::path& path) {
  try {
    return parse_unitary(read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string serialize_unitary(const Matrix& u) { return serialize_matrix(u, EntryKind::Unitary); }

std::string parse_subset_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto s = strip_comment(line);
    if (s.empty()) continue;
    for (char ch : s)
      require(ch == '0' || ch == '1', ErrorKind::Format,
              "subset string may contain only 0 and 1, found '" + std::string(1, ch) + "'");
    return std::string(s);
  }
  fail(ErrorKind::Format, "empty subset string file");
}

std::string load_subset_string(const std::filesystem::path& path) {
  return parse_subset_string(read_text_file(path));
}

std::vector<WeightedState> parse_witness(std::string_view json_text,
                                         const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Format, std::string("witness JSON: ") + e.what());
  }
  require(doc.is_object() && doc.contains("coeffs") && doc.contains("states") &&
              doc["coeffs"].is_array() && doc["states"].is_array(),
          ErrorKind::Format, "witness JSON needs arrays 'coeffs' and 'states'");
  require(doc["coeffs"].size() == doc["states"].size() && !doc["coeffs"].empty(),
          ErrorKind::Format, "witness 'coeffs' and 'states' must be nonempty and equally long");
  std::vector<WeightedState> terms;
  for (std::size_t i = 0; i < doc["coeffs"].size(); ++i) {
    const auto& c = doc["coeffs"][i];
    const auto& s = doc["states"][i];
    require(c.is_number() && std::isfinite(c.get<double>()), ErrorKind::Format,
            "witness coefficient " + std::to_string(i) + " is not a finite number");
    require(s.is_string(), ErrorKind::Format, "witness state " + std::to_string(i) + " is not a path");
    terms.push_back({c.get<double>(), to_density(load_state(base_dir / s.get<std::string>()))});
    require(terms.back().state.num_qubits() == terms.front().state.num_qubits(), ErrorKind::Format,
            "witness states have different qubit counts");
  }
  return terms;
}

std::vector<WeightedState> load_witness(const std::filesystem::path& path) {
  return parse_witness(read_text_file(path), path.parent_path());
}

void save_witness(const std::vector<WeightedState>& terms, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["coeffs"] = nlohmann::json::array();
  doc["states"] = nlohmann::json::array();
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string name = path.stem().string() + ".rho" + std::to_string(k) + ".txt";
    save_state(terms[k].state, path.parent_path() / name);
    doc["coeffs"].push_back(terms[k].coefficient);
    doc["states"].push_back(name);
  }
  write_text_file(path, doc.dump(2) + "\n");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Format, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Format, "cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  require(static_cast<bool>(out), ErrorKind::Format, "write failed for '" + path.string() + "'");
}

}  // namespace qlang
