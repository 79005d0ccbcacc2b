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
#include <cstring>
#include <string>

#include "catch_amalgamated.hpp"
#include "qlang/qlang.h"

namespace {

const std::string kData = QLANG_TEST_DATA;

qlang_state* load(const char* name) {
  qlang_state* s = nullptr;
  REQUIRE(qlang_state_load((kData + "/" + name).c_str(), &s) == QLANG_OK);
  return s;
}

std::string take(char* s) {
  std::string out = s;
  qlang_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("C API state handles") {
  qlang_state* s = load("bell.txt");
  CHECK(qlang_state_num_qubits(s) == 2);
  CHECK(qlang_state_is_pure(s) == 1);
  char* text = nullptr;
  REQUIRE(qlang_state_serialize(s, &text) == QLANG_OK);
  qlang_state* back = nullptr;
  CHECK(qlang_state_parse(text, &back) == QLANG_OK);
  qlang_string_free(text);
  CHECK(qlang_state_num_qubits(back) == 2);
  qlang_state_free(back);
  qlang_state_free(s);
}

TEST_CASE("C API reports errors through status codes") {
  qlang_state* s = nullptr;
  CHECK(qlang_state_load((kData + "/bad_norm.txt").c_str(), &s) == QLANG_ERR_FORMAT);
  CHECK(s == nullptr);
  CHECK(std::string(qlang_last_error()).find("0.8") != std::string::npos);
  CHECK(qlang_state_parse(nullptr, &s) == QLANG_ERR_ARGUMENT);
  CHECK(qlang_state_parse("qlang-state 1\nqubits 20\nkind pure\n", &s) == QLANG_ERR_RESOURCE);
  CHECK(std::string(qlang_status_name(QLANG_ERR_UNSUPPORTED)) == "unsupported-oracle");
  qlang_state_free(nullptr);
  qlang_verdict_free(nullptr);
}

TEST_CASE("C API purity and separability verdicts") {
  qlang_state* zero = load("zero2.txt");
  qlang_state* bell = load("bell.txt");
  qlang_options o;
  qlang_options_default(&o);
  o.repetitions = 10;
  qlang_verdict* v = nullptr;
  REQUIRE(qlang_verify_purity(zero, 1, &o, &v) == QLANG_OK);
  CHECK(qlang_verdict_accepted(v) == 1);
  qlang_verdict_free(v);
  REQUIRE(qlang_verify_separable(bell, "10", &o, &v) == QLANG_OK);
  CHECK(qlang_verdict_accepted(v) == 0);
  CHECK(qlang_verdict_exact_accept_prob(v) == Catch::Approx(std::pow(0.75, 10)).epsilon(1e-12));
  char* json = nullptr;
  REQUIRE(qlang_verdict_to_json(v, &json) == QLANG_OK);
  CHECK(take(json).find("\"exactAcceptProb\"") != std::string::npos);
  qlang_verdict_free(v);
  char* bits = nullptr;
  CHECK(qlang_honest_subset(bell, &bits) == QLANG_ERR_STRATEGY);
  CHECK(qlang_verify_separable(bell, "111", &o, &v) == QLANG_ERR_CERTIFICATE);
  qlang_state_free(zero);
  qlang_state_free(bell);
}

TEST_CASE("C API witness and reflection flows") {
  qlang_state* bell = load("bell.txt");
  qlang_options o;
  qlang_options_default(&o);
  qlang_witness* w = nullptr;
  REQUIRE(qlang_witness_honest(bell, nullptr, &w) == QLANG_OK);
  qlang_verdict* v = nullptr;
  REQUIRE(qlang_verify_witness(bell, w, &o, &v) == QLANG_OK);
  CHECK(qlang_verdict_accepted(v) == 1);
  qlang_verdict_free(v);
  qlang_witness_free(w);

  o.repetitions = 16;
  qlang_circuit* c = nullptr;
  REQUIRE(qlang_reflection_certificate(bell, "honest", 1, &c) == QLANG_OK);
  REQUIRE(qlang_verify_reflection(bell, c, &o, &v) == QLANG_OK);
  CHECK(qlang_verdict_accepted(v) == 1);
  qlang_verdict_free(v);
  REQUIRE(qlang_verify_checker(bell, c, &o, &v) == QLANG_OK);
  CHECK(qlang_verdict_accepted(v) == 1);
  qlang_verdict_free(v);
  qlang_circuit_free(c);
  REQUIRE(qlang_reflection_certificate(bell, "identity", 1, &c) == QLANG_OK);
  REQUIRE(qlang_verify_reflection(bell, c, &o, &v) == QLANG_OK);
  CHECK(qlang_verdict_accepted(v) == 0);
  qlang_verdict_free(v);
  qlang_circuit_free(c);
  CHECK(qlang_reflection_certificate(bell, "bogus", 1, &c) == QLANG_ERR_ARGUMENT);
  qlang_state_free(bell);
}

TEST_CASE("C API analysis entry points") {
  qlang_state* ghz = load("ghz3.txt");
  char* json = nullptr;
  REQUIRE(qlang_classify(ghz, "L2", 0.1, 1, nullptr, &json) == QLANG_OK);
  const auto text = take(json);
  CHECK(text.find("\"Reject\"") != std::string::npos);
  CHECK(text.find("0.29289321881345") != std::string::npos);
  qlang_state_free(ghz);

  qlang_circuit* c = nullptr;
  REQUIRE(qlang_circuit_parse("qubits 2\nH q0\n", nullptr, &c) == QLANG_OK);
  int classical = -1;
  REQUIRE(qlang_bridge(c, &classical) == QLANG_OK);
  CHECK(classical == 0);
  qlang_circuit_free(c);

  uint64_t m = 0;
  REQUIRE(qlang_required_repetitions(1.0 / 3.0, 1e-3, &m) == QLANG_OK);
  CHECK(m == 125);
  CHECK(qlang_required_repetitions(-1.0, 1e-3, &m) == QLANG_ERR_ARGUMENT);
}

TEST_CASE("C API experiments") {
  char* json = nullptr;
  char* csv = nullptr;
  const char* cfg = R"({"base": {"protocol": "L1", "instance": {"generator": "bell_prefix", "qubits": 2},
                        "shots": 50, "trials": 3, "masterSeed": 5}, "grid": {"repetitions": [1, 2, 3]}})";
  REQUIRE(qlang_sweep_run(cfg, nullptr, 2, &json, &csv) == QLANG_OK);
  const auto first = take(json);
  CHECK(take(csv).find("acceptanceRate") != std::string::npos);
  REQUIRE(qlang_sweep_run(cfg, nullptr, 1, &json, nullptr) == QLANG_OK);
  CHECK(take(json) == first);
  CHECK(qlang_sweep_run("{", nullptr, 1, &json, nullptr) == QLANG_ERR_FORMAT);
  REQUIRE(qlang_experiment_run(R"({"protocol": "L1", "instance": {"generator": "zero"}})", nullptr, 1, &json) ==
          QLANG_OK);
  CHECK(take(json).find("\"acceptanceRate\": 1.0") != std::string::npos);
  REQUIRE(qlang_detection_rate("identity", 2, 16, 20, 3, 1, &json) == QLANG_OK);
  CHECK(take(json).find("\"rate\": 1.0") != std::string::npos);
}
