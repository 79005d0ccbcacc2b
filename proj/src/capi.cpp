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

#include "qlang/qlang.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include <json.hpp>

#include "qlang/circuit.hpp"
#include "qlang/error.hpp"
#include "qlang/experiments.hpp"
#include "qlang/io.hpp"
#include "qlang/languages.hpp"
#include "qlang/protocols.hpp"

struct qlang_state {
  qlang::StateVariant value;
};

struct qlang_circuit {
  qlang::Circuit value;
};

struct qlang_witness {
  qlang::WitnessDecomposition value;
};

struct qlang_verdict {
  qlang::Verdict value;
};

namespace {

thread_local std::string g_last_error;

qlang_status status_of(qlang::ErrorKind kind) {
  switch (kind) {
    case qlang::ErrorKind::Argument: return QLANG_ERR_ARGUMENT;
    case qlang::ErrorKind::Resource: return QLANG_ERR_RESOURCE;
    case qlang::ErrorKind::Format: return QLANG_ERR_FORMAT;
    case qlang::ErrorKind::UnsupportedOracle: return QLANG_ERR_UNSUPPORTED;
    case qlang::ErrorKind::Certificate: return QLANG_ERR_CERTIFICATE;
    case qlang::ErrorKind::Strategy: return QLANG_ERR_STRATEGY;
  }
  return QLANG_ERR_INTERNAL;
}

qlang_status argument_error(const char* msg) {
  g_last_error = std::string("argument error: ") + msg;
  return QLANG_ERR_ARGUMENT;
}

template <typename F>
qlang_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return QLANG_OK;
  } catch (const qlang::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("format error: ") + e.what();
    return QLANG_ERR_FORMAT;
  } catch (const std::bad_alloc&) {
    g_last_error = "resource error: out of memory";
    return QLANG_ERR_RESOURCE;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
    return QLANG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "internal error: unknown exception";
    return QLANG_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qlang::ProtocolOptions options_of(const qlang_options* opts) {
  qlang::ProtocolOptions o;
  if (opts == nullptr) return o;
  o.repetitions = opts->repetitions;
  o.shots = opts->shots;
  o.seed = opts->seed;
  o.tolerance = opts->tolerance;
  o.panel_size = opts->panel_size;
  return o;
}

qlang::PureState pure_of(const qlang_state* s) {
  if (const auto* p = std::get_if<qlang::PureState>(&s->value)) return *p;
  auto v = qlang::as_pure(std::get<qlang::DensityOperator>(s->value));
  qlang::require(v.has_value(), qlang::ErrorKind::Argument, "this protocol needs a pure state");
  return *v;
}

std::filesystem::path path_or_empty(const char* p) {
  return p == nullptr ? std::filesystem::path{} : std::filesystem::path{p};
}

template <typename F>
qlang_status make_verdict(qlang_verdict** out, F&& run) {
  if (out == nullptr) return argument_error("null output pointer");
  *out = nullptr;
  return guarded([&] { *out = new qlang_verdict{run()}; });
}

}  // namespace

extern "C" {

const char* qlang_version(void) { return "0.1.0"; }

const char* qlang_last_error(void) { return g_last_error.c_str(); }

const char* qlang_status_name(qlang_status status) {
  switch (status) {
    case QLANG_OK: return "ok";
    case QLANG_ERR_ARGUMENT: return "argument";
    case QLANG_ERR_FORMAT: return "format";
    case QLANG_ERR_RESOURCE: return "resource";
    case QLANG_ERR_UNSUPPORTED: return "unsupported-oracle";
    case QLANG_ERR_CERTIFICATE: return "certificate";
    case QLANG_ERR_STRATEGY: return "strategy";
    case QLANG_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void qlang_string_free(char* s) { std::free(s); }

void qlang_options_default(qlang_options* out) {
  if (out == nullptr) return;
  const qlang::ProtocolOptions o;
  out->repetitions = o.repetitions;
  out->shots = o.shots;
  out->seed = o.seed;
  out->tolerance = o.tolerance;
  out->panel_size = o.panel_size;
}

qlang_status qlang_state_load(const char* path, qlang_state** out) {
  if (path == nullptr || out == nullptr) return argument_error("null pointer");
  *out = nullptr;
  return guarded([&] { *out = new qlang_state{qlang::load_state(path)}; });
}

qlang_status qlang_state_parse(const char* text, qlang_state** out) {
  if (text == nullptr || out == nullptr) return argument_error("null pointer");
  *out = nullptr;
  return guarded([&] { *out = new qlang_state{qlang::parse_state(text)}; });
}

qlang_status qlang_state_serialize(const qlang_state* s, char** out) {
  if (s == nullptr || out == nullptr) return argument_error("null pointer");
  *out = nullptr;
  return guarded([&] { *out = copy_string(qlang::serialize_state(s->value)); });
}

int qlang_state_num_qubits(const qlang_state* s) {
  return s == nullptr ? -1 : qlang::num_qubits(s->value);
}

int qlang_state_is_pure(const qlang_state* s) {
  return s != nullptr && std::holds_alternative<qlang::PureState>(s->value) ? 1 : 0;
}

void qlang_state_free(qlang_state* s) { delete s; }

qlang_status qlang_circuit_load(const char* path, qlang_circuit** out) {
  if (path == nullptr || out == nullptr) return argument_error("null pointer");
  *out = nullptr;
  return guarded([&] { *out = new qlang_circuit{qlang::load_circuit(path)}; });
}

qlang_status qlang_circuit_parse(const char* text, const char* base_dir, qlang_circuit** out) {
  if (text == nullptr || out == nullptr) return argument_error("null pointer");
  *out = nullptr;
  return guarded([&] { *out = new qlang_circuit{qlang::parse_circuit(text, path_or_empty(base_dir))}; });
}

qlang_status qlang_circuit_save(const qlang_circuit* c, const char* path) {
  if (c == nullptr || path == nullptr) return argument_error("null pointer");
  return guarded([&] { qlang::save_circuit(c->value, path); });
}

int qlang_circuit_num_qubits(const qlang_circuit* c) {
  return c == nullptr ? -1 : c->value.num_qubits();
}

void qlang_circuit_free(qlang_circuit* c) { delete c; }

qlang_status qlang_witness_load(const char* path, qlang_witness** out) {
  if (path == nullptr || out == nullptr) return argument_error("null pointer");
  *out = nullptr;
  return guarded([&] { *out = new qlang_witness{{qlang::load_witness(path)}}; });
}

qlang_status qlang_witness_honest(const qlang_state* s, const char* cut, qlang_witness** out) {
  if (s == nullptr || out == nullptr) return argument_error("null pointer");
  *out = nullptr;
  return guarded([&] {
    const auto rho = qlang::to_density(s->value);
    const auto bp = cut == nullptr ? qlang::Bipartition::from_subset(rho.num_qubits(), {0})
                                   : qlang::Bipartition::from_string(cut);
    *out = new qlang_witness{qlang::merlin_L3_honest(rho, bp)};
  });
}

qlang_status qlang_witness_save(const qlang_witness* w, const char* path) {
  if (w == nullptr || path == nullptr) return argument_error("null pointer");
  return guarded([&] { qlang::save_witness(w->value.terms, path); });
}

void qlang_witness_free(qlang_witness* w) { delete w; }

qlang_status qlang_verify_purity(const qlang_state* s, int prefix, const qlang_options* opts,
                                 qlang_verdict** out) {
  if (s == nullptr) return argument_error("null state");
  return make_verdict(out, [&] {
    if (const auto* p = std::get_if<qlang::PureState>(&s->value))
      return qlang::verify_L1(*p, prefix, options_of(opts));
    const auto& rho = std::get<qlang::DensityOperator>(s->value);
    qlang::require(prefix >= 1 && prefix <= rho.num_qubits(), qlang::ErrorKind::Argument,
                   "prefix out of range");
    std::vector<int> keep;
    for (int q = 0; q < prefix; ++q) keep.push_back(q);
    auto v = qlang::verify_purity(qlang::partial_trace(rho, keep), options_of(opts));
    v.protocol = "L1";
    return v;
  });
}

qlang_status qlang_subset_load(const char* path, char** out) {
  if (path == nullptr || out == nullptr) return argument_error("null pointer");
  *out = nullptr;
  return guarded([&] { *out = copy_string(qlang::load_subset_string(path)); });
}

qlang_status qlang_honest_subset(const qlang_state* s, char** out) {
  if (s == nullptr || out == nullptr) return argument_error("null pointer");
  *out = nullptr;
  return guarded([&] { *out = copy_string(qlang::merlin_L2_honest(pure_of(s)).bits); });
}

qlang_status qlang_verify_separable(const qlang_state* s, const char* subset_bits,
                                    const qlang_options* opts, qlang_verdict** out) {
  if (s == nullptr || subset_bits == nullptr) return argument_error("null pointer");
  return make_verdict(out, [&] {
    return qlang::verify_L2(pure_of(s), qlang::SubsetString{subset_bits}, options_of(opts));
  });
}

qlang_status qlang_verify_witness(const qlang_state* s, const qlang_witness* w,
                                  const qlang_options* opts, qlang_verdict** out) {
  if (s == nullptr || w == nullptr) return argument_error("null pointer");
  return make_verdict(out, [&] {
    return qlang::verify_L3(qlang::to_density(s->value), w->value, options_of(opts));
  });
}

qlang_status qlang_reflection_certificate(const qlang_state* s, const char* strategy,
                                          uint64_t seed, qlang_circuit** out) {
  if (s == nullptr || strategy == nullptr || out == nullptr) return argument_error("null pointer");
  *out = nullptr;
  return guarded([&] {
    *out = new qlang_circuit{
        qlang::reflection_certificate(qlang::MerlinStrategy::parse(strategy), pure_of(s), seed)};
  });
}

qlang_status qlang_verify_reflection(const qlang_state* s, const qlang_circuit* cert,
                                     const qlang_options* opts, qlang_verdict** out) {
  if (s == nullptr || cert == nullptr) return argument_error("null pointer");
  return make_verdict(out, [&] { return qlang::verify_L4(pure_of(s), cert->value, options_of(opts)); });
}

qlang_status qlang_verify_checker(const qlang_state* s, const qlang_circuit* cert,
                                  const qlang_options* opts, qlang_verdict** out) {
  if (s == nullptr || cert == nullptr) return argument_error("null pointer");
  return make_verdict(out, [&] { return qlang::verify_L5(pure_of(s), cert->value, options_of(opts)); });
}

int qlang_verdict_accepted(const qlang_verdict* v) { return v != nullptr && v->value.accepted ? 1 : 0; }

double qlang_verdict_exact_accept_prob(const qlang_verdict* v) {
  return v == nullptr ? 0.0 : v->value.exact_accept_prob;
}

qlang_status qlang_verdict_to_json(const qlang_verdict* v, char** out) {
  if (v == nullptr || out == nullptr) return argument_error("null pointer");
  *out = nullptr;
  return guarded([&] { *out = copy_string(qlang::to_json(v->value).dump(2)); });
}

void qlang_verdict_free(qlang_verdict* v) { delete v; }

qlang_status qlang_classify(const qlang_state* s, const char* language, double epsilon, int prefix,
                            const char* cut, char** json_out) {
  if (s == nullptr || language == nullptr || json_out == nullptr) return argument_error("null pointer");
  *json_out = nullptr;
  return guarded([&] {
    const auto lang = qlang::parse_language(language);
    qlang::ClassifyParams params;
    params.prefix = qlang::PrefixFunction::constant(prefix);
    if (cut != nullptr) params.cut = qlang::Bipartition::from_string(cut);
    const auto r = qlang::classify(lang, s->value, epsilon, params);
    auto j = qlang::to_json(r);
    j["language"] = qlang::to_string(lang);
    j["epsilon"] = epsilon;
    *json_out = copy_string(j.dump(2));
  });
}

qlang_status qlang_bridge(const qlang_circuit* c, int* classical) {
  if (c == nullptr || classical == nullptr) return argument_error("null pointer");
  return guarded([&] { *classical = qlang::member_L3_classical(c->value) ? 1 : 0; });
}

qlang_status qlang_required_repetitions(double gap, double error_bound, uint64_t* out) {
  if (out == nullptr) return argument_error("null pointer");
  return guarded([&] { *out = qlang::required_repetitions(gap, error_bound); });
}

qlang_status qlang_experiment_run(const char* config_json, const char* base_dir, unsigned workers,
                                  char** json_out) {
  if (config_json == nullptr || json_out == nullptr) return argument_error("null pointer");
  *json_out = nullptr;
  return guarded([&] {
    const auto cfg = qlang::config_from_json(nlohmann::json::parse(config_json));
    qlang::RunContext ctx;
    ctx.base_dir = path_or_empty(base_dir);
    ctx.workers = workers;
    *json_out = copy_string(qlang::to_json(qlang::run_experiment(cfg, ctx)).dump(2));
  });
}

qlang_status qlang_sweep_run(const char* sweep_json, const char* base_dir, unsigned workers,
                             char** json_out, char** csv_out) {
  if (sweep_json == nullptr || json_out == nullptr) return argument_error("null pointer");
  *json_out = nullptr;
  if (csv_out != nullptr) *csv_out = nullptr;
  return guarded([&] {
    const auto grid = qlang::sweep_from_json(nlohmann::json::parse(sweep_json));
    qlang::RunContext ctx;
    ctx.base_dir = path_or_empty(base_dir);
    ctx.workers = workers;
    const auto records = qlang::sweep(grid, ctx);
    std::string json = qlang::to_json(records).dump(2);
    std::string csv = csv_out != nullptr ? qlang::records_to_csv(records) : std::string{};
    *json_out = copy_string(json);
    if (csv_out != nullptr) *csv_out = copy_string(csv);
  });
}

qlang_status qlang_detection_rate(const char* strategy, int qubits, int probes, uint64_t trials,
                                  uint64_t seed, unsigned workers, char** json_out) {
  if (strategy == nullptr || json_out == nullptr) return argument_error("null pointer");
  *json_out = nullptr;
  return guarded([&] {
    const auto strat = qlang::MerlinStrategy::parse(strategy);
    qlang::InstanceSource family;
    family.generator = "haar";
    family.qubits = qubits;
    const auto r = qlang::detection_rate(strat, family, probes, trials, seed, 0, workers);
    nlohmann::json j{{"strategy", strat.tag()}, {"qubits", qubits},   {"probes", probes},
                     {"trials", r.trials},      {"detected", r.successes}, {"rate", r.rate},
                     {"lower", r.lower},        {"upper", r.upper}};
    *json_out = copy_string(j.dump(2));
  });
}

}  // extern "C"
