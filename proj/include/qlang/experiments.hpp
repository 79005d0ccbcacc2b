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

// Seeded experiment harness: repeated protocol trials, parameter sweeps,
// detection rates for cheating strategies, and JSON/CSV records.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlang/io.hpp"
#include "qlang/languages.hpp"
#include "qlang/protocols.hpp"

namespace qlang {

/// Where a trial's instance comes from. Random generators without a fixed
/// seed draw a fresh instance per trial from the trial seed.
struct InstanceSource {
  /// file | zero | product | bell_prefix | ghz | haar | partial | werner | mixed
  std::string generator = "zero";
  std::string file;
  int qubits = 2;
  double parameter = 0.0;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const InstanceSource&, const InstanceSource&) = default;
};

struct ExperimentConfig {
  LanguageId protocol = LanguageId::L1;
  InstanceSource instance;
  /// honest | cheat:<strategy tag> | subset:<bits> | file:<path> | none
  std::string certificate = "honest";
  int repetitions = 1;
  std::uint64_t shots = 0;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  double epsilon = 0.1;
  int prefix = 1;
  std::optional<std::string> cut;
  std::size_t panel_size = 200;
  double tolerance = 1e-6;

  /// Throws on out-of-range fields.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct Aggregate {
  /// Mean of the sampled frequency (sampled mode) or exact probability.
  double acceptance_rate = 0.0;
  double accepted_fraction = 0.0;
  double detection_rate = 0.0;
  std::optional<double> mean_abs_exact_sampled;

  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::uint64_t cell = 0;
  std::optional<RegionVerdict> region;
  std::vector<Verdict> trials;
  Aggregate aggregate;
  double wall_time_seconds = 0.0;  // never part of equality or replay output
};

struct RunContext {
  std::filesystem::path base_dir;
  unsigned workers = 1;
  std::uint64_t cell = 0;
};

/// Seed of trial t in sweep cell c.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t trial) noexcept;

StateVariant make_instance(const InstanceSource& source, std::uint64_t trial_seed,
                           const std::filesystem::path& base_dir = {});

/// Runs one protocol trial of `cfg` with the given seed.
Verdict run_trial(const ExperimentConfig& cfg, std::uint64_t seed,
                  const std::filesystem::path& base_dir = {});

ExperimentRecord run_experiment(const ExperimentConfig& cfg, const RunContext& ctx = {});
Aggregate aggregate_of(const std::vector<Verdict>& trials);

struct RateEstimate {
  double rate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
};

/// Wilson score interval at z = 1.959963984540054 (95%).
RateEstimate wilson_interval(std::uint64_t successes, std::uint64_t trials);

/// Fraction of L4 trials (fresh instance per trial unless the family fixes a
/// seed) in which the verifier rejects the strategy's certificate.
RateEstimate detection_rate(const MerlinStrategy& strategy, const InstanceSource& family,
                            int probes, std::uint64_t trials, std::uint64_t seed,
                            std::uint64_t shots = 0, unsigned workers = 1);

struct SweepGrid {
  ExperimentConfig base;
  std::vector<int> repetitions;
  std::vector<std::uint64_t> shots;
  std::vector<double> epsilons;

  std::size_t cell_count() const noexcept;
};

inline constexpr std::size_t kMaxSweepCells = 10000;
inline constexpr std::uint64_t kMaxSweepTrials = 10000000;

/// One record per grid cell, ordered repetitions-major, then shots, then
/// epsilon. Refuses oversized grids before running anything.
std::vector<ExperimentRecord> sweep(const SweepGrid& grid, const RunContext& ctx = {});
ExperimentConfig cell_config(const SweepGrid& grid, std::size_t cell);

/// Runs fn(i) for i in [0, count) on up to `workers` threads; rethrows the
/// first failure.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

// JSON and CSV surfaces.
nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const RegionVerdict& r);
nlohmann::json to_json(const ExperimentRecord& r, bool include_timing = false);
nlohmann::json to_json(const std::vector<ExperimentRecord>& records, bool include_timing = false);
SweepGrid sweep_from_json(const nlohmann::json& j);
std::string records_to_csv(const std::vector<ExperimentRecord>& records);

}  // namespace qlang
