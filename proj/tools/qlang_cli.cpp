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

// qlang command-line driver. Talks to the library only through qlang.h.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qlang/qlang.h"

namespace {

namespace fs = std::filesystem;

enum Exit { kAccept = 0, kReject = 1, kUsage = 2, kResource = 3 };

struct StateFree {
  void operator()(qlang_state* s) const { qlang_state_free(s); }
};
struct CircuitFree {
  void operator()(qlang_circuit* c) const { qlang_circuit_free(c); }
};
struct WitnessFree {
  void operator()(qlang_witness* w) const { qlang_witness_free(w); }
};
struct VerdictFree {
  void operator()(qlang_verdict* v) const { qlang_verdict_free(v); }
};
struct StringFree {
  void operator()(char* s) const { qlang_string_free(s); }
};

using StatePtr = std::unique_ptr<qlang_state, StateFree>;
using CircuitPtr = std::unique_ptr<qlang_circuit, CircuitFree>;
using WitnessPtr = std::unique_ptr<qlang_witness, WitnessFree>;
using VerdictPtr = std::unique_ptr<qlang_verdict, VerdictFree>;
using StringPtr = std::unique_ptr<char, StringFree>;

struct Failure {
  int code;
};

int exit_code_of(qlang_status s) {
  switch (s) {
    case QLANG_OK: return kAccept;
    case QLANG_ERR_STRATEGY: return kReject;
    case QLANG_ERR_ARGUMENT:
    case QLANG_ERR_FORMAT:
    case QLANG_ERR_CERTIFICATE: return kUsage;
    case QLANG_ERR_RESOURCE:
    case QLANG_ERR_UNSUPPORTED:
    case QLANG_ERR_INTERNAL: return kResource;
  }
  return kResource;
}

void check(qlang_status s) {
  if (s == QLANG_OK) return;
  std::cerr << "qlang: " << qlang_last_error() << "\n";
  throw Failure{exit_code_of(s)};
}

void usage_error(const std::string& msg) {
  std::cerr << "qlang: usage error: " << msg << "\n";
  throw Failure{kUsage};
}

StatePtr load_state(const std::string& path) {
  qlang_state* s = nullptr;
  check(qlang_state_load(path.c_str(), &s));
  return StatePtr(s);
}

CircuitPtr load_circuit(const std::string& path) {
  qlang_circuit* c = nullptr;
  check(qlang_circuit_load(path.c_str(), &c));
  return CircuitPtr(c);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "qlang: format error: cannot open " << path << "\n";
    throw Failure{kUsage};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "qlang: resource error: cannot write " << path.string() << "\n";
    throw Failure{kResource};
  }
}

int emit_verdict(qlang_verdict* raw) {
  VerdictPtr v(raw);
  char* json = nullptr;
  check(qlang_verdict_to_json(v.get(), &json));
  StringPtr owned(json);
  std::cout << json << "\n";
  const bool accepted = qlang_verdict_accepted(v.get()) != 0;
  std::cerr << (accepted ? "accepted" : "rejected")
            << " (exact acceptance probability " << qlang_verdict_exact_accept_prob(v.get()) << ")\n";
  return accepted ? kAccept : kReject;
}

void emit_json(char* raw) {
  StringPtr owned(raw);
  std::cout << raw << "\n";
}

unsigned default_workers() {
  if (const char* env = std::getenv("QLANG_WORKERS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return 1;
}

std::string base_dir_of(const std::string& path) {
  return fs::absolute(path).parent_path().string();
}

struct Common {
  std::string state;
  std::string cert;
  bool honest = false;
  int reps = 1;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-6;

  qlang_options options() const {
    qlang_options o;
    qlang_options_default(&o);
    o.repetitions = reps;
    o.shots = shots;
    o.seed = seed;
    o.tolerance = tolerance;
    return o;
  }
};

void require_one_certificate(const Common& c, bool allow_cheat = false, bool has_cheat = false) {
  const int given = (c.cert.empty() ? 0 : 1) + (c.honest ? 1 : 0) + (allow_cheat && has_cheat ? 1 : 0);
  if (given != 1) usage_error("give exactly one certificate source");
}

int run_purity(const Common& c, int prefix) {
  auto s = load_state(c.state);
  const auto o = c.options();
  qlang_verdict* v = nullptr;
  check(qlang_verify_purity(s.get(), prefix, &o, &v));
  return emit_verdict(v);
}

int run_separable(const Common& c) {
  require_one_certificate(c);
  auto s = load_state(c.state);
  std::string bits;
  char* raw = nullptr;
  if (c.honest) {
    check(qlang_honest_subset(s.get(), &raw));
    bits = raw;
    qlang_string_free(raw);
  } else if (fs::is_regular_file(c.cert)) {
    check(qlang_subset_load(c.cert.c_str(), &raw));
    bits = raw;
    qlang_string_free(raw);
  } else {
    bits = c.cert;
  }
  const auto o = c.options();
  qlang_verdict* v = nullptr;
  check(qlang_verify_separable(s.get(), bits.c_str(), &o, &v));
  return emit_verdict(v);
}

int run_witness(const Common& c, const std::optional<std::string>& cut, std::size_t panel) {
  require_one_certificate(c);
  auto s = load_state(c.state);
  qlang_witness* w = nullptr;
  if (c.honest) check(qlang_witness_honest(s.get(), cut ? cut->c_str() : nullptr, &w));
  else check(qlang_witness_load(c.cert.c_str(), &w));
  WitnessPtr witness(w);
  auto o = c.options();
  o.panel_size = panel;
  qlang_verdict* v = nullptr;
  check(qlang_verify_witness(s.get(), witness.get(), &o, &v));
  return emit_verdict(v);
}

CircuitPtr reflection_cert(const Common& c, const qlang_state* s, const std::string& cheat) {
  require_one_certificate(c, true, !cheat.empty());
  if (!c.cert.empty()) return load_circuit(c.cert);
  qlang_circuit* raw = nullptr;
  check(qlang_reflection_certificate(s, c.honest ? "honest" : cheat.c_str(), c.seed, &raw));
  return CircuitPtr(raw);
}

int run_reflect(const Common& c, const std::string& cheat, bool checker) {
  auto s = load_state(c.state);
  auto cert = reflection_cert(c, s.get(), cheat);
  const auto o = c.options();
  qlang_verdict* v = nullptr;
  if (checker) check(qlang_verify_checker(s.get(), cert.get(), &o, &v));
  else check(qlang_verify_reflection(s.get(), cert.get(), &o, &v));
  return emit_verdict(v);
}

int run_oracle(const std::string& state, const std::string& language, double epsilon, int prefix,
               const std::optional<std::string>& cut) {
  auto s = load_state(state);
  char* json = nullptr;
  check(qlang_classify(s.get(), language.c_str(), epsilon, prefix, cut ? cut->c_str() : nullptr, &json));
  std::cerr << "classified under " << language << "\n";
  emit_json(json);
  return kAccept;
}

int run_bridge(const std::string& circuit) {
  auto c = load_circuit(circuit);
  int classical = 0;
  check(qlang_bridge(c.get(), &classical));
  std::cout << "{\n  \"language\": \"L3classical\",\n  \"member\": " << (classical ? "true" : "false")
            << ",\n  \"qubits\": " << qlang_circuit_num_qubits(c.get()) << "\n}\n";
  std::cerr << (classical ? "member" : "not a member") << "\n";
  return classical ? kAccept : kReject;
}

int run_sweep(const std::string& config, const std::string& out_dir, unsigned workers) {
  const std::string text = read_file(config);
  char* json = nullptr;
  char* csv = nullptr;
  check(qlang_sweep_run(text.c_str(), base_dir_of(config).c_str(), workers, &json, &csv));
  StringPtr json_owned(json);
  StringPtr csv_owned(csv);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "qlang: resource error: cannot create " << out_dir << "\n";
    throw Failure{kResource};
  }
  write_file(fs::path(out_dir) / "sweep.json", std::string(json) + "\n");
  write_file(fs::path(out_dir) / "sweep.csv", csv);
  std::cout << json << "\n";
  std::cerr << "wrote " << (fs::path(out_dir) / "sweep.json").string() << " and sweep.csv\n";
  return kAccept;
}

int run_experiment(const std::string& config, unsigned workers) {
  const std::string text = read_file(config);
  char* json = nullptr;
  check(qlang_experiment_run(text.c_str(), base_dir_of(config).c_str(), workers, &json));
  emit_json(json);
  return kAccept;
}

int run_detect(const std::string& strategy, int qubits, int probes, std::uint64_t trials,
               std::uint64_t seed, unsigned workers) {
  char* json = nullptr;
  check(qlang_detection_rate(strategy.c_str(), qubits, probes, trials, seed, workers, &json));
  emit_json(json);
  return kAccept;
}

int run_calib(double gap, double err) {
  std::uint64_t m = 0;
  check(qlang_required_repetitions(gap, err, &m));
  std::cout << "{\n  \"gap\": " << gap << ",\n  \"err\": " << err << ",\n  \"repetitions\": " << m
            << "\n}\n";
  std::cerr << m << " repetitions\n";
  return kAccept;
}

void add_common(CLI::App* cmd, Common& c, bool with_cert) {
  cmd->add_option("--state", c.state, "State file")->required();
  if (with_cert) {
    cmd->add_option("--cert", c.cert, "Certificate");
    cmd->add_flag("--honest", c.honest, "Synthesize the honest certificate");
  }
  cmd->add_option("--shots", c.shots, "Sampled protocol runs; 0 selects exact mode");
  cmd->add_option("--seed", c.seed, "Seed");
}

}  // namespace

int main(int argc, char** argv) {
  std::cout.precision(17);
  CLI::App app{"qlang: Arthur-Merlin verification of quantum languages"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qlang_version()));

  Common c;
  int prefix = 1;
  std::optional<std::string> cut;
  std::size_t panel = 200;
  std::string cheat;
  std::string language;
  double epsilon = 0.1;
  std::string circuit;
  std::string config;
  std::string out_dir;
  unsigned workers = default_workers();
  double gap = 1.0 / 3.0;
  double err = 1e-3;
  std::string strategy;
  int qubits = 2;
  std::uint64_t trials = 100;
  int probes = 16;

  auto* purity = app.add_subcommand("purity", "Purity of a prefix (L1)");
  add_common(purity, c, false);
  purity->add_option("--prefix", prefix, "Prefix length")->required();
  purity->add_option("--reps", c.reps, "Repetitions M");

  auto* separable = app.add_subcommand("separable", "Separability with a subset string (L2)");
  add_common(separable, c, true);
  separable->add_option("--reps", c.reps, "Repetitions M");

  auto* witness = app.add_subcommand("witness", "Entanglement witness (L3)");
  add_common(witness, c, true);
  witness->add_option("--cut", cut, "Bipartition for --honest, '1' marks subsystem A");
  witness->add_option("--panel", panel, "Random product states in the validity panel");

  auto* reflect = app.add_subcommand("reflect", "Easy reflection (L4)");
  add_common(reflect, c, true);
  reflect->add_option("--cheat", cheat, "Cheating strategy tag");
  reflect->add_option("--probes", probes, "Probe count M");
  reflect->add_option("--tolerance", c.tolerance, "Exact-mode tolerance");

  auto* checkable = app.add_subcommand("check", "Checkable state (L5)");
  add_common(checkable, c, true);
  checkable->add_option("--cheat", cheat, "Cheating strategy tag");
  checkable->add_option("--probes", probes, "Probe count M");
  checkable->add_option("--tolerance", c.tolerance, "Exact-mode tolerance");

  std::string oracle_state;
  auto* oracle = app.add_subcommand("oracle", "Region map of a state");
  oracle->add_option("--state", oracle_state, "State file")->required();
  oracle->add_option("--language", language, "L1, L2 or L3")->required();
  oracle->add_option("--epsilon", epsilon, "Illegal gap width");
  oracle->add_option("--prefix", prefix, "Prefix length for L1");
  oracle->add_option("--cut", cut, "Bipartition for L3");

  auto* bridge = app.add_subcommand("bridge", "Classical product test of a circuit");
  bridge->add_option("--circuit", circuit, "Circuit file")->required();

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep");
  sweep->add_option("--config", config, "Sweep config JSON")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--workers", workers, "Worker threads");

  auto* run = app.add_subcommand("run", "Single experiment");
  run->add_option("--config", config, "Experiment config JSON")->required();
  run->add_option("--workers", workers, "Worker threads");

  auto* detect = app.add_subcommand("detect", "Detection rate of an L4 strategy");
  detect->add_option("--strategy", strategy, "Strategy tag")->required();
  detect->add_option("--qubits", qubits, "Target qubits");
  detect->add_option("--probes", probes, "Probe count M");
  detect->add_option("--trials", trials, "Trials");
  detect->add_option("--seed", c.seed, "Seed");
  detect->add_option("--workers", workers, "Worker threads");

  auto* calib = app.add_subcommand("calib", "Repetitions for a gap and error bound");
  calib->add_option("--gap", gap, "Completeness minus soundness")->required();
  calib->add_option("--err", err, "Error bound")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*purity) return run_purity(c, prefix);
    if (*separable) return run_separable(c);
    if (*witness) return run_witness(c, cut, panel);
    if (*reflect) {
      c.reps = probes;
      return run_reflect(c, cheat, false);
    }
    if (*checkable) {
      c.reps = probes;
      return run_reflect(c, cheat, true);
    }
    if (*oracle) return run_oracle(oracle_state, language, epsilon, prefix, cut);
    if (*bridge) return run_bridge(circuit);
    if (*sweep) return run_sweep(config, out_dir, workers);
    if (*run) return run_experiment(config, workers);
    if (*detect) return run_detect(strategy, qubits, probes, trials, c.seed, workers);
    if (*calib) return run_calib(gap, err);
  } catch (const Failure& f) {
    return f.code;
  }
  return kUsage;
}
