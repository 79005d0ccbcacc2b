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

#include "qlang/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "qlang/error.hpp"
#include "qlang/rng.hpp"

namespace qlang {

namespace {

constexpr std::uint64_t kInstanceStream = 0x1A57;
constexpr std::uint64_t kTrialStream = 0x7E1A;

PureState ghz(int n) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dimension_of(n)));
  v(0) = v(v.size() - 1) = std::numbers::sqrt2 / 2.0;
  return PureState(std::move(v));
}

PureState bell_prefix(int n) {
  require(n >= 2, ErrorKind::Argument, "bell_prefix needs at least two qubits");
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = std::numbers::sqrt2 / 2.0;
  PureState s{bell};
  if (n > 2) s = tensor(s, PureState::zeros(n - 2));
  return s;
}

PureState partial_ghz(int n, double p) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::Argument, "partial weight must lie in [0, 1]");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dimension_of(n)));
  v(0) = std::sqrt(1.0 - p);
  v(v.size() - 1) = std::sqrt(p);
  return PureState(std::move(v));
}

DensityOperator werner(double p) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::Argument, "Werner visibility must lie in [0, 1]");
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = std::numbers::sqrt2 / 2.0;
  return DensityOperator(p * bell * bell.adjoint() + (1.0 - p) * Matrix::Identity(4, 4) / 4.0);
}

PureState require_pure_instance(const StateVariant& s) {
  if (const auto* p = std::get_if<PureState>(&s)) return *p;
  auto v = as_pure(std::get<DensityOperator>(s));
  require(v.has_value(), ErrorKind::Argument, "protocol needs a pure instance");
  return *v;
}

bool starts_with(const std::string& s, std::string_view prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

Bipartition cut_for(const ExperimentConfig& cfg, int n) {
  if (cfg.cut) return Bipartition::from_string(*cfg.cut);
  return Bipartition::from_subset(n, {0});
}

ProtocolOptions options_for(const ExperimentConfig& cfg, std::uint64_t seed) {
  ProtocolOptions opts;
  opts.repetitions = cfg.repetitions;
  opts.shots = cfg.shots;
  opts.seed = seed;
  opts.panel_size = cfg.panel_size;
  opts.tolerance = cfg.tolerance;
  return opts;
}

Circuit circuit_certificate(const ExperimentConfig& cfg, const PureState& phi, std::uint64_t seed,
                            const std::filesystem::path& base_dir) {
  const auto& c = cfg.certificate;
  if (c == "honest") return reflection_certificate({StrategyMode::Honest, 0.0}, phi, seed);
  if (starts_with(c, "cheat:"))
    return reflection_certificate(MerlinStrategy::parse(c.substr(6)), phi, seed);
  if (starts_with(c, "file:")) return load_circuit(base_dir / c.substr(5));
  fail(ErrorKind::Argument, "certificate '" + c + "' is not valid for " + to_string(cfg.protocol));
}

}  // namespace

void ExperimentConfig::validate() const {
  require(trials >= 1, ErrorKind::Argument, "trials must be at least 1");
  require(repetitions >= 1, ErrorKind::Argument, "repetitions must be at least 1");
  require(epsilon > 0.0 && epsilon < 1.0, ErrorKind::Argument, "epsilon must lie in (0, 1)");
  require(protocol != LanguageId::L3Classical, ErrorKind::Argument,
          "L3classical has no verification protocol");
  require(instance.qubits >= 1 && instance.qubits <= kDefaultMaxQubits, ErrorKind::Argument,
          "instance qubit count out of range");
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t trial) noexcept {
  return derive_seed(derive_seed(master_seed, kTrialStream), trial, cell);
}

StateVariant make_instance(const InstanceSource& source, std::uint64_t seed,
                           const std::filesystem::path& base_dir) {
  const std::uint64_t s = source.seed ? *source.seed : derive_seed(seed, kInstanceStream);
  const int n = source.qubits;
  const auto& g = source.generator;
  if (g == "file") return load_state(base_dir / source.file);
  if (g == "zero") return PureState::zeros(n);
  if (g == "product") return random_local_product_state(n, s);
  if (g == "bell_prefix") return bell_prefix(n);
  if (g == "ghz") return ghz(n);
  if (g == "haar") return random_pure_state(n, s);
  if (g == "partial") return partial_ghz(n, source.parameter);
  if (g == "werner") return werner(source.parameter);
  if (g == "mixed")
    return random_density_operator(n, std::max(1, static_cast<int>(source.parameter)), s);
  fail(ErrorKind::Argument, "unknown instance generator '" + g + "'");
}

Verdict run_trial(const ExperimentConfig& cfg, std::uint64_t seed,
                  const std::filesystem::path& base_dir) {
  const StateVariant instance = make_instance(cfg.instance, seed, base_dir);
  const ProtocolOptions opts = options_for(cfg, seed);
  switch (cfg.protocol) {
    case LanguageId::L1:
      return verify_L1(require_pure_instance(instance), cfg.prefix, opts);
    case LanguageId::L2: {
      const auto phi = require_pure_instance(instance);
      SubsetString cert;
      if (cfg.certificate == "honest") cert = merlin_L2_honest(phi);
      else if (starts_with(cfg.certificate, "subset:")) cert.bits = cfg.certificate.substr(7);
      else if (starts_with(cfg.certificate, "file:"))
        cert.bits = load_subset_string(base_dir / cfg.certificate.substr(5));
      else fail(ErrorKind::Argument, "certificate '" + cfg.certificate + "' is not valid for L2");
      return verify_L2(phi, cert, opts);
    }
    case LanguageId::L3: {
      const auto rho = to_density(instance);
      WitnessDecomposition cert;
      if (cfg.certificate == "honest") {
        cert = merlin_L3_honest(rho, cut_for(cfg, rho.num_qubits()));
      } else if (cfg.certificate == "cheat:minus-identity") {
        const auto d = static_cast<Eigen::Index>(rho.dim());
        cert.terms = decompose_hermitian(-Matrix::Identity(d, d));
      } else if (starts_with(cfg.certificate, "file:")) {
        cert.terms = load_witness(base_dir / cfg.certificate.substr(5));
      } else {
        fail(ErrorKind::Argument, "certificate '" + cfg.certificate + "' is not valid for L3");
      }
      return verify_L3(rho, cert, opts);
    }
    case LanguageId::L4:
    case LanguageId::L5: {
      const auto phi = require_pure_instance(instance);
      const Circuit cert = circuit_certificate(cfg, phi, seed, base_dir);
      return cfg.protocol == LanguageId::L4 ? verify_L4(phi, cert, opts) : verify_L5(phi, cert, opts);
    }
    default:
      break;
  }
  fail(ErrorKind::Argument, std::string("no protocol for ") + to_string(cfg.protocol));
}

Aggregate aggregate_of(const std::vector<Verdict>& trials) {
  Aggregate a;
  if (trials.empty()) return a;
  double rate = 0.0;
  double accepted = 0.0;
  double gap = 0.0;
  std::size_t sampled = 0;
  for (const auto& v : trials) {
    rate += v.sampled_accept_freq ? *v.sampled_accept_freq : v.exact_accept_prob;
    accepted += v.accepted ? 1.0 : 0.0;
    if (v.sampled_accept_freq) {
      gap += std::abs(*v.sampled_accept_freq - v.exact_accept_prob);
      ++sampled;
    }
  }
  const auto n = static_cast<double>(trials.size());
  a.acceptance_rate = rate / n;
  a.accepted_fraction = accepted / n;
  a.detection_rate = 1.0 - a.accepted_fraction;
  if (sampled > 0) a.mean_abs_exact_sampled = gap / static_cast<double>(sampled);
  return a;
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  const unsigned threads = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg, const RunContext& ctx) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentRecord record;
  record.config = cfg;
  record.cell = ctx.cell;
  record.trials.resize(cfg.trials);
  parallel_for(cfg.trials, ctx.workers, [&](std::size_t t) {
    record.trials[t] = run_trial(cfg, trial_seed(cfg.master_seed, ctx.cell, t), ctx.base_dir);
  });
  record.aggregate = aggregate_of(record.trials);

  const bool fixed_instance = cfg.instance.seed.has_value() ||
                              (cfg.instance.generator != "haar" && cfg.instance.generator != "product" &&
                               cfg.instance.generator != "mixed");
  const bool metric = cfg.protocol == LanguageId::L1 || cfg.protocol == LanguageId::L2 ||
                      cfg.protocol == LanguageId::L3;
  if (fixed_instance && metric) {
    const auto instance = make_instance(cfg.instance, 0, ctx.base_dir);
    ClassifyParams params;
    params.prefix = PrefixFunction::constant(cfg.prefix);
    if (cfg.protocol == LanguageId::L3) params.cut = cut_for(cfg, num_qubits(instance));
    try {
      record.region = classify(cfg.protocol, instance, cfg.epsilon, params);
    } catch (const Error&) {
      // Region is informational; unsupported oracle cases leave it empty.
    }
  }
  record.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

RateEstimate wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  require(trials >= 1 && successes <= trials, ErrorKind::Argument, "invalid Wilson counts");
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half), successes, trials};
}

RateEstimate detection_rate(const MerlinStrategy& strategy, const InstanceSource& family,
                            int probes, std::uint64_t trials, std::uint64_t seed,
                            std::uint64_t shots, unsigned workers) {
  require(trials >= 1, ErrorKind::Argument, "trials must be at least 1");
  ExperimentConfig cfg;
  cfg.protocol = LanguageId::L4;
  cfg.instance = family;
  cfg.certificate = strategy.mode == StrategyMode::Honest ? "honest" : "cheat:" + strategy.tag();
  cfg.repetitions = probes;
  cfg.shots = shots;
  cfg.trials = trials;
  cfg.master_seed = seed;
  RunContext ctx;
  ctx.workers = workers;
  const auto record = run_experiment(cfg, ctx);
  std::uint64_t detected = 0;
  for (const auto& v : record.trials) detected += v.accepted ? 0 : 1;
  return wilson_interval(detected, trials);
}

std::size_t SweepGrid::cell_count() const noexcept {
  auto len = [](std::size_t n) { return std::max<std::size_t>(n, 1); };
  return len(repetitions.size()) * len(shots.size()) * len(epsilons.size());
}

ExperimentConfig cell_config(const SweepGrid& grid, std::size_t cell) {
  const std::size_t ns = std::max<std::size_t>(grid.shots.size(), 1);
  const std::size_t ne = std::max<std::size_t>(grid.epsilons.size(), 1);
  ExperimentConfig cfg = grid.base;
  const std::size_t e = cell % ne;
  const std::size_t s = (cell / ne) % ns;
  const std::size_t r = cell / (ne * ns);
  if (!grid.repetitions.empty()) cfg.repetitions = grid.repetitions[r];
  if (!grid.shots.empty()) cfg.shots = grid.shots[s];
  if (!grid.epsilons.empty()) cfg.epsilon = grid.epsilons[e];
  return cfg;
}

std::vector<ExperimentRecord> sweep(const SweepGrid& grid, const RunContext& ctx) {
  const std::size_t cells = grid.cell_count();
  require(cells <= kMaxSweepCells, ErrorKind::Resource,
          "sweep has " + std::to_string(cells) + " cells, limit is " + std::to_string(kMaxSweepCells));
  require(static_cast<double>(cells) * static_cast<double>(grid.base.trials) <=
              static_cast<double>(kMaxSweepTrials),
          ErrorKind::Resource, "sweep trial count exceeds " + std::to_string(kMaxSweepTrials));
  for (std::size_t c = 0; c < cells; ++c) cell_config(grid, c).validate();
  std::vector<ExperimentRecord> records(cells);
  parallel_for(cells, ctx.workers, [&](std::size_t c) {
    RunContext cell_ctx = ctx;
    cell_ctx.cell = c;
    cell_ctx.workers = 1;
    records[c] = run_experiment(cell_config(grid, c), cell_ctx);
  });
  return records;
}

// ------------------------------------------------------------------ JSON

namespace {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Format, std::string("config field '") + key + "': " + e.what());
  }
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json inst;
  inst["generator"] = cfg.instance.generator;
  if (!cfg.instance.file.empty()) inst["file"] = cfg.instance.file;
  inst["qubits"] = cfg.instance.qubits;
  inst["parameter"] = cfg.instance.parameter;
  if (cfg.instance.seed) inst["seed"] = *cfg.instance.seed;
  nlohmann::json j;
  j["protocol"] = to_string(cfg.protocol);
  j["instance"] = inst;
  j["certificate"] = cfg.certificate;
  j["repetitions"] = cfg.repetitions;
  j["shots"] = cfg.shots;
  j["trials"] = cfg.trials;
  j["masterSeed"] = cfg.master_seed;
  j["epsilon"] = cfg.epsilon;
  j["prefix"] = cfg.prefix;
  if (cfg.cut) j["cut"] = *cfg.cut;
  j["panelSize"] = cfg.panel_size;
  j["tolerance"] = cfg.tolerance;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  require(j.is_object(), ErrorKind::Format, "experiment config must be a JSON object");
  ExperimentConfig cfg;
  cfg.protocol = parse_language(get_or<std::string>(j, "protocol", "L1"));
  if (j.contains("instance")) {
    const auto& inst = j["instance"];
    require(inst.is_object(), ErrorKind::Format, "'instance' must be an object");
    cfg.instance.generator = get_or<std::string>(inst, "generator", inst.contains("file") ? "file" : "zero");
    cfg.instance.file = get_or<std::string>(inst, "file", "");
    cfg.instance.qubits = get_or<int>(inst, "qubits", 2);
    cfg.instance.parameter = get_or<double>(inst, "parameter", 0.0);
    if (inst.contains("seed") && !inst["seed"].is_null())
      cfg.instance.seed = get_or<std::uint64_t>(inst, "seed", 0);
  }
  cfg.certificate = get_or<std::string>(j, "certificate", "honest");
  cfg.repetitions = get_or<int>(j, "repetitions", 1);
  cfg.shots = get_or<std::uint64_t>(j, "shots", 0);
  cfg.trials = get_or<std::uint64_t>(j, "trials", 1);
  cfg.master_seed = get_or<std::uint64_t>(j, "masterSeed", 0);
  cfg.epsilon = get_or<double>(j, "epsilon", 0.1);
  cfg.prefix = get_or<int>(j, "prefix", 1);
  if (j.contains("cut") && !j["cut"].is_null()) cfg.cut = get_or<std::string>(j, "cut", "");
  cfg.panel_size = get_or<std::size_t>(j, "panelSize", 200);
  cfg.tolerance = get_or<double>(j, "tolerance", 1e-6);
  return cfg;
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["protocol"] = v.protocol;
  j["accepted"] = v.accepted;
  j["exactAcceptProb"] = v.exact_accept_prob;
  j["sampledAcceptFreq"] = optional_number(v.sampled_accept_freq);
  j["repetitions"] = v.repetitions;
  j["shots"] = v.shots;
  j["seed"] = v.seed;
  j["copiesConsumed"] = v.copies_consumed;
  j["copyBudget"] = v.copy_budget;
  nlohmann::json t = nlohmann::json::array();
  for (const auto& s : v.transcript) t.push_back({{"name", s.name}, {"value", s.value}});
  j["transcript"] = t;
  return j;
}

nlohmann::json to_json(const RegionVerdict& r) {
  return {{"region", to_string(r.region)}, {"margin", r.margin}};
}

nlohmann::json to_json(const ExperimentRecord& r, bool include_timing) {
  nlohmann::json j;
  j["cell"] = r.cell;
  j["config"] = to_json(r.config);
  j["region"] = r.region ? to_json(*r.region) : nlohmann::json(nullptr);
  j["aggregate"] = {
      {"acceptanceRate", r.aggregate.acceptance_rate},
      {"acceptedFraction", r.aggregate.accepted_fraction},
      {"detectionRate", r.aggregate.detection_rate},
      {"meanAbsExactSampled", optional_number(r.aggregate.mean_abs_exact_sampled)},
  };
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& v : r.trials) trials.push_back(to_json(v));
  j["trials"] = trials;
  if (include_timing) j["wallTimeSeconds"] = r.wall_time_seconds;
  return j;
}

nlohmann::json to_json(const std::vector<ExperimentRecord>& records, bool include_timing) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : records) j.push_back(to_json(r, include_timing));
  return j;
}

SweepGrid sweep_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("base"), ErrorKind::Format, "sweep config needs a 'base' object");
  SweepGrid grid;
  grid.base = config_from_json(j["base"]);
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    require(g.is_object(), ErrorKind::Format, "'grid' must be an object");
    grid.repetitions = get_or<std::vector<int>>(g, "repetitions", {});
    grid.shots = get_or<std::vector<std::uint64_t>>(g, "shots", {});
    grid.epsilons = get_or<std::vector<double>>(g, "epsilon", {});
  }
  return grid;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out =
      "cell,protocol,generator,certificate,repetitions,shots,epsilon,trials,masterSeed,"
      "acceptanceRate,acceptedFraction,detectionRate,meanAbsExactSampled,region,margin\n";
  for (const auto& r : records) {
    const auto& c = r.config;
    out += std::to_string(r.cell) + "," + to_string(c.protocol) + "," + c.instance.generator + "," +
           c.certificate + "," + std::to_string(c.repetitions) + "," + std::to_string(c.shots) + "," +
           format_double(c.epsilon) + "," + std::to_string(c.trials) + "," +
           std::to_string(c.master_seed) + "," + format_double(r.aggregate.acceptance_rate) + "," +
           format_double(r.aggregate.accepted_fraction) + "," +
           format_double(r.aggregate.detection_rate) + "," +
           (r.aggregate.mean_abs_exact_sampled ? format_double(*r.aggregate.mean_abs_exact_sampled) : "") +
           "," + (r.region ? to_string(r.region->region) : "") + "," +
           (r.region ? format_double(r.region->margin) : "") + "\n";
  }
  return out;
}

}  // namespace qlang
