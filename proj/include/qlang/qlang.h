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

#ifndef QLANG_QLANG_H_
#define QLANG_QLANG_H_

/* C interface to the qlang library. Every call returns a status code; on
 * failure qlang_last_error() describes the problem for the calling thread.
 * Strings returned through out-parameters are owned by the caller and must
 * be released with qlang_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(QLANG_BUILDING_LIBRARY)
#define QLANG_API __attribute__((visibility("default")))
#else
#define QLANG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qlang_status {
  QLANG_OK = 0,
  QLANG_ERR_ARGUMENT = 1,
  QLANG_ERR_FORMAT = 2,
  QLANG_ERR_RESOURCE = 3,
  QLANG_ERR_UNSUPPORTED = 4,
  QLANG_ERR_CERTIFICATE = 5,
  QLANG_ERR_STRATEGY = 6,
  QLANG_ERR_INTERNAL = 7
} qlang_status;

typedef struct qlang_state qlang_state;
typedef struct qlang_circuit qlang_circuit;
typedef struct qlang_witness qlang_witness;
typedef struct qlang_verdict qlang_verdict;

typedef struct qlang_options {
  int repetitions;
  uint64_t shots; /* 0 selects exact mode */
  uint64_t seed;
  double tolerance;
  size_t panel_size;
} qlang_options;

QLANG_API const char* qlang_version(void);
QLANG_API const char* qlang_last_error(void);
QLANG_API const char* qlang_status_name(qlang_status status);
QLANG_API void qlang_string_free(char* s);
QLANG_API void qlang_options_default(qlang_options* out);

/* States. */
QLANG_API qlang_status qlang_state_load(const char* path, qlang_state** out);
QLANG_API qlang_status qlang_state_parse(const char* text, qlang_state** out);
QLANG_API qlang_status qlang_state_serialize(const qlang_state* s, char** out);
QLANG_API int qlang_state_num_qubits(const qlang_state* s);
QLANG_API int qlang_state_is_pure(const qlang_state* s);
QLANG_API void qlang_state_free(qlang_state* s);

/* Circuits. */
QLANG_API qlang_status qlang_circuit_load(const char* path, qlang_circuit** out);
QLANG_API qlang_status qlang_circuit_parse(const char* text, const char* base_dir,
                                           qlang_circuit** out);
QLANG_API qlang_status qlang_circuit_save(const qlang_circuit* c, const char* path);
QLANG_API int qlang_circuit_num_qubits(const qlang_circuit* c);
QLANG_API void qlang_circuit_free(qlang_circuit* c);

/* Witness decompositions. cut is a 0/1 string, '1' marking subsystem A;
 * NULL selects qubit 0 against the rest. */
QLANG_API qlang_status qlang_witness_load(const char* path, qlang_witness** out);
QLANG_API qlang_status qlang_witness_honest(const qlang_state* s, const char* cut,
                                            qlang_witness** out);
QLANG_API qlang_status qlang_witness_save(const qlang_witness* w, const char* path);
QLANG_API void qlang_witness_free(qlang_witness* w);

/* Verifiers. */
QLANG_API qlang_status qlang_verify_purity(const qlang_state* s, int prefix,
                                           const qlang_options* opts, qlang_verdict** out);
/* Reads a subset-string certificate file. */
QLANG_API qlang_status qlang_subset_load(const char* path, char** out);
QLANG_API qlang_status qlang_honest_subset(const qlang_state* s, char** out);
QLANG_API qlang_status qlang_verify_separable(const qlang_state* s, const char* subset_bits,
                                              const qlang_options* opts, qlang_verdict** out);
QLANG_API qlang_status qlang_verify_witness(const qlang_state* s, const qlang_witness* w,
                                            const qlang_options* opts, qlang_verdict** out);
/* strategy is "honest" or a cheat tag such as "other-reflection:0.9". */
QLANG_API qlang_status qlang_reflection_certificate(const qlang_state* s, const char* strategy,
                                                    uint64_t seed, qlang_circuit** out);
QLANG_API qlang_status qlang_verify_reflection(const qlang_state* s, const qlang_circuit* cert,
                                               const qlang_options* opts, qlang_verdict** out);
QLANG_API qlang_status qlang_verify_checker(const qlang_state* s, const qlang_circuit* cert,
                                            const qlang_options* opts, qlang_verdict** out);

QLANG_API int qlang_verdict_accepted(const qlang_verdict* v);
QLANG_API double qlang_verdict_exact_accept_prob(const qlang_verdict* v);
QLANG_API qlang_status qlang_verdict_to_json(const qlang_verdict* v, char** out);
QLANG_API void qlang_verdict_free(qlang_verdict* v);

/* Analysis. language is "L1", "L2" or "L3"; cut may be NULL. */
QLANG_API qlang_status qlang_classify(const qlang_state* s, const char* language, double epsilon,
                                      int prefix, const char* cut, char** json_out);
/* Writes 1 to *classical when the circuit is not a full single-qubit product. */
QLANG_API qlang_status qlang_bridge(const qlang_circuit* c, int* classical);
QLANG_API qlang_status qlang_required_repetitions(double gap, double error_bound, uint64_t* out);

/* Experiments. Config documents are JSON; base_dir resolves relative paths. */
QLANG_API qlang_status qlang_experiment_run(const char* config_json, const char* base_dir,
                                            unsigned workers, char** json_out);
QLANG_API qlang_status qlang_sweep_run(const char* sweep_json, const char* base_dir,
                                       unsigned workers, char** json_out, char** csv_out);
/* Rejection rate of an L4 strategy over fresh Haar-random targets, with a
 * 95% Wilson interval, as JSON. */
QLANG_API qlang_status qlang_detection_rate(const char* strategy, int qubits, int probes,
                                            uint64_t trials, uint64_t seed, unsigned workers,
                                            char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* QLANG_QLANG_H_ */
