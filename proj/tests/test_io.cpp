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

#include <filesystem>
#include <fstream>
#include <string>

#include "catch_amalgamated.hpp"
#include "qlang/error.hpp"
#include "qlang/io.hpp"

using namespace qlang;
using Catch::Approx;

namespace {

const std::filesystem::path kData{QLANG_TEST_DATA};

std::filesystem::path scratch(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "qlang_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_state(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Argument;
}

}  // namespace

TEST_CASE("Bell state file loads as a normalized 2-qubit pure state") {
  const auto s = load_state(kData / "bell.txt");
  REQUIRE(std::holds_alternative<PureState>(s));
  const auto& p = std::get<PureState>(s);
  CHECK(p.num_qubits() == 2);
  CHECK(p.amplitudes().norm() == Approx(1.0).margin(1e-15));
}

TEST_CASE("norm violations report the measured value") {
  try {
    load_state(kData / "bad_norm.txt");
    FAIL("expected a format error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Format);
    CHECK(std::string(e.what()).find("0.8") != std::string::npos);
  }
}

TEST_CASE("random 3-qubit density round trips to 1e-14") {
  const auto rho = random_density_operator(3, 4, 12);
  const auto back = parse_state(serialize_state(rho));
  REQUIRE(std::holds_alternative<DensityOperator>(back));
  CHECK((std::get<DensityOperator>(back).matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-14);
  const auto phi = random_pure_state(4, 3);
  const auto pb = std::get<PureState>(parse_state(serialize_state(phi)));
  CHECK((pb.amplitudes() - phi.amplitudes()).cwiseAbs().maxCoeff() < 1e-15);
  save_state(rho, scratch("rho.txt"));
  CHECK((to_density(load_state(scratch("rho.txt"))).matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("state file format errors") {
  CHECK(kind_of("qlang-state 2\nqubits 1\nkind pure\n1 0\n0 0\n") == ErrorKind::Format);
  CHECK(kind_of("qubits 1\nkind pure\n1 0\n0 0\n") == ErrorKind::Format);
  CHECK(kind_of("qlang-state 1\nqubits 1\nkind pure\n1 0\n") == ErrorKind::Format);
  CHECK(kind_of("qlang-state 1\nqubits 1\nkind pure\n1 0\n0 x\n") == ErrorKind::Format);
  CHECK(kind_of("qlang-state 1\nqubits 1\nkind mixed\n1 0\n0 0\n") == ErrorKind::Format);
  CHECK(kind_of("qlang-state 1\nqubits 1\nkind density\n0.5 0\n0.3 0\n0.1 0\n0.5 0\n") == ErrorKind::Format);
  CHECK(kind_of("qlang-state 1\nqubits 1\nkind density\n0.7 0\n0 0\n0 0\n0.7 0\n") == ErrorKind::Format);
  CHECK(kind_of("qlang-state 1\nqubits 15\nkind pure\n1 0\n") == ErrorKind::Resource);
  CHECK_THROWS_AS(load_state(kData / "missing.txt"), Error);
}

TEST_CASE("comments and blank lines are ignored") {
  const auto s = parse_state("# a comment\nqlang-state 1\n\nqubits 1 # trailing\nkind pure\n0 0\n1 0\n");
  CHECK(std::abs(std::get<PureState>(s)[1] - Complex(1.0)) < 1e-15);
}

TEST_CASE("unitary files") {
  const auto u = random_unitary(4, 2);
  const auto back = parse_unitary(serialize_unitary(u));
  CHECK((back - u).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(parse_unitary("qlang-state 1\nqubits 1\nkind unitary\n1 0\n1 0\n0 0\n1 0\n"), Error);
  CHECK_THROWS_AS(parse_state(serialize_unitary(u)), Error);
}

TEST_CASE("subset string files") {
  CHECK(parse_subset_string("# cut\n  101  \n") == "101");
  CHECK_THROWS_AS(parse_subset_string("12\n"), Error);
  CHECK_THROWS_AS(parse_subset_string("\n"), Error);
}

TEST_CASE("witness files round trip") {
  const Matrix w = 0.5 * Matrix::Identity(4, 4) - DensityOperator::from_pure(random_pure_state(2, 1)).matrix();
  const auto terms = decompose_hermitian(w);
  save_witness(terms, scratch("w.json"));
  const auto back = load_witness(scratch("w.json"));
  REQUIRE(back.size() == terms.size());
  CHECK((recompose(back) - w).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(parse_witness("{\"coeffs\": [1], \"states\": []}", {}), Error);
  CHECK_THROWS_AS(parse_witness("not json", {}), Error);
}

TEST_CASE("num_qubits and to_density") {
  const StateVariant p = PureState::zeros(3);
  CHECK(num_qubits(p) == 3);
  CHECK(to_density(p).matrix()(0, 0) == Complex(1.0));
}

TEST_CASE("format_double is exact") {
  CHECK(format_double(0.0) == "0");
  CHECK(std::stod(format_double(0.1)) == 0.1);
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
