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

#include "qlang/protocols.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qlang/error.hpp"
#include "qlang/languages.hpp"
#include "qlang/rng.hpp"

namespace qlang {

namespace {

// Sub-stream tags for derive_seed, one per protocol phase.
enum Stream : std::uint64_t {
  kDecision = 1,
  kPanel = 2,
  kProbe = 3,
  kProbeShots = 4,
  kCheckerProbe = 5,
  kCheckerShots = 6,
  kCheat = 7,
};

constexpr double kExactSignTolerance = 1e-9;

std::uint64_t runs_of(const ProtocolOptions& opts) { return std::max<std::uint64_t>(1, opts.shots); }

void check_options(const ProtocolOptions& opts) {
  require(opts.repetitions >= 1, ErrorKind::Argument, "repetitions must be at least 1");
  require(opts.thresholds.soundness < opts.thresholds.completeness, ErrorKind::Argument,
          "soundness threshold must be below completeness threshold");
}

// Fraction of `shots` draws that give outcome 0 of a two-outcome measurement.
double sample_zero_frequency(double p0, std::uint64_t shots, std::uint64_t seed) {
  const OutcomeSampler sampler({p0, 1.0 - p0});
  CounterRng rng(seed);
  std::uint64_t zeros = 0;
  for (std::uint64_t s = 0; s < shots; ++s) zeros += sampler.draw(rng.uniform()) == 0 ? 1 : 0;
  return static_cast<double>(zeros) / static_cast<double>(shots);
}

// Estimate of tr(ab) from the estimation network, with its standard error.
struct OverlapEstimate {
  double value;
  double variance;
};

OverlapEstimate estimate_from_p0(double p0, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) return {2.0 * p0 - 1.0, 0.0};
  const double f = sample_zero_frequency(p0, shots, seed);
  return {2.0 * f - 1.0, 4.0 * f * (1.0 - f) / static_cast<double>(shots)};
}

void finish(Verdict& v, double statistic, const ProtocolOptions& opts) {
  v.accepted = statistic >= opts.thresholds.decision_cut();
}

Verdict start(std::string protocol, const ProtocolOptions& opts) {
  Verdict v;
  v.protocol = std::move(protocol);
  v.repetitions = opts.repetitions;
  v.shots = opts.shots;
  v.seed = opts.seed;
  return v;
}

}  // namespace

std::optional<double> Verdict::statistic(std::string_view name) const {
  for (const auto& s : transcript)
    if (s.name == name) return s.value;
  return std::nullopt;
}

Certificate Certificate::of(SubsetString s) {
  const auto size = s.bits.size();
  return {std::move(s), size};
}

Certificate Certificate::of(WitnessDecomposition w) {
  const auto size = w.terms.size();
  return {std::move(w), size};
}

Certificate Certificate::of(Circuit c) {
  const auto size = c.gates().size();
  return {std::move(c), size};
}

// ---------------------------------------------------------------- L1 / L2

Verdict verify_purity(const DensityOperator& rho, const ProtocolOptions& opts) {
  check_options(opts);
  const PurityPlan plan = build_purity_circuit(rho.num_qubits(), opts.repetitions);
  const double p0 = plan.control_p0(rho);
  Verdict v = start("L1", opts);
  v.exact_accept_prob = std::pow(p0, opts.repetitions);
  v.copy_budget = 2ULL * static_cast<std::uint64_t>(opts.repetitions) * runs_of(opts);
  v.transcript.push_back({"P0", p0});
  v.transcript.push_back({"purity", 2.0 * p0 - 1.0});
  if (opts.shots == 0) {
    v.copies_consumed = 2ULL * static_cast<std::uint64_t>(opts.repetitions);
    finish(v, v.exact_accept_prob, opts);
    return v;
  }
  std::uint64_t accepted = 0;
  std::uint64_t tests = 0;
  for (std::uint64_t run = 0; run < opts.shots; ++run) {
    const auto [ok, performed] = plan.sample_run(p0, derive_seed(opts.seed, kDecision), run);
    accepted += ok ? 1 : 0;
    tests += static_cast<std::uint64_t>(performed);
  }
  v.copies_consumed = 2 * tests;
  v.sampled_accept_freq = static_cast<double>(accepted) / static_cast<double>(opts.shots);
  v.transcript.push_back({"acceptedRuns", static_cast<double>(accepted)});
  finish(v, *v.sampled_accept_freq, opts);
  return v;
}

Verdict verify_L1(const PureState& phi, int prefix, const ProtocolOptions& opts) {
  require(prefix >= 1 && prefix <= phi.num_qubits(), ErrorKind::Argument,
          "prefix length " + std::to_string(prefix) + " outside [1, " +
              std::to_string(phi.num_qubits()) + "]");
  std::vector<int> keep(static_cast<std::size_t>(prefix));
  std::iota(keep.begin(), keep.end(), 0);
  return verify_purity(partial_trace(phi, keep), opts);
}

SubsetString merlin_L2_honest(const PureState& phi) {
  const auto m = member_L2(phi);
  require(m.member, ErrorKind::Strategy,
          "no product bipartition exists (margin " + std::to_string(m.margin) + ")");
  return {m.cut->to_string()};
}

Verdict verify_L2(const PureState& phi, const SubsetString& cert, const ProtocolOptions& opts) {
  const auto& bits = cert.bits;
  require(static_cast<int>(bits.size()) == phi.num_qubits(), ErrorKind::Certificate,
          "subset string has " + std::to_string(bits.size()) + " bits for " +
              std::to_string(phi.num_qubits()) + " qubits");
  require(std::all_of(bits.begin(), bits.end(), [](char c) { return c == '0' || c == '1'; }),
          ErrorKind::Certificate, "subset string may contain only 0 and 1");
  require(bits.find('0') != std::string::npos && bits.find('1') != std::string::npos,
          ErrorKind::Certificate, "subset string must mark a proper nonempty subset");
  Verdict v = verify_purity(subset_extract(phi, bits), opts);
  v.protocol = "L2";
  v.transcript.push_back({"subsetSize", static_cast<double>(std::count(bits.begin(), bits.end(), '1'))});
  return v;
}

// --------------------------------------------------------------------- L3

WitnessDecomposition merlin_L3_honest(const DensityOperator& rho, const Bipartition& cut) {
  const auto m = member_L3(rho, cut);
  require(m.member, ErrorKind::Strategy, "state is separable across " + cut.to_string());
  const auto d = static_cast<Eigen::Index>(rho.dim());
  Matrix w;
  if (auto pure = as_pure(rho)) {
    // Product states have overlap at most lambda_max^2 with psi.
    const double lambda = schmidt_spectrum(*pure, cut).largest();
    w = lambda * lambda * Matrix::Identity(d, d) -
        pure->amplitudes() * pure->amplitudes().adjoint();
  } else {
    const Matrix pt = partial_transpose(rho.matrix(), rho.num_qubits(), cut.subset_b());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (pt + pt.adjoint()));
    const Vector v = eig.eigenvectors().col(0);
    w = partial_transpose(v * v.adjoint(), rho.num_qubits(), cut.subset_b());
  }
  return {decompose_hermitian(0.5 * (w + w.adjoint()))};
}

std::vector<PureState> validity_panel(int num_qubits, std::size_t random_count, std::uint64_t seed) {
  std::vector<PureState> panel;
  const std::size_t dim = dimension_of(num_qubits);
  panel.reserve(dim + random_count);
  for (std::size_t i = 0; i < dim; ++i) panel.push_back(PureState::basis(num_qubits, i));
  for (std::size_t j = 0; j < random_count; ++j)
    panel.push_back(random_local_product_state(num_qubits, derive_seed(seed, kPanel, j)));
  return panel;
}

namespace {

struct WitnessValue {
  double value;
  double sigma;
};

// tr(W sigma) = sum_i c_i tr(rho_i sigma), each overlap read off the
// estimation network.
WitnessValue witness_expectation(const WitnessDecomposition& w, const DensityOperator& sigma,
                                 std::uint64_t shots, std::uint64_t seed) {
  double value = 0.0;
  double variance = 0.0;
  for (std::size_t i = 0; i < w.terms.size(); ++i) {
    const double c = w.terms[i].coefficient;
    const double p0 = swap_test_p0(w.terms[i].state, sigma);
    const auto est = estimate_from_p0(p0, shots, derive_seed(seed, i));
    value += c * est.value;
    variance += c * c * est.variance;
  }
  return {value, std::sqrt(variance)};
}

struct WitnessRun {
  bool valid = true;
  std::size_t checked = 0;
  double worst_panel_value = 0.0;
  WitnessValue decision{0.0, 0.0};
  bool accepted = false;
};

WitnessRun run_witness(const DensityOperator& rho, const WitnessDecomposition& cert,
                       const std::vector<PureState>& panel, std::uint64_t shots,
                       std::uint64_t seed) {
  WitnessRun run;
  run.worst_panel_value = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < panel.size(); ++j) {
    const auto val = witness_expectation(cert, DensityOperator::from_pure(panel[j]), shots,
                                         derive_seed(seed, kPanel, j));
    ++run.checked;
    run.worst_panel_value = std::min(run.worst_panel_value, val.value);
    const double bound = shots == 0 ? -kExactSignTolerance : -3.0 * val.sigma;
    if (val.value < bound) {
      run.valid = false;
      return run;
    }
  }
  run.decision = witness_expectation(cert, rho, shots, derive_seed(seed, kDecision));
  const double bound = shots == 0 ? -kExactSignTolerance : -3.0 * run.decision.sigma;
  run.accepted = run.decision.value < bound;
  return run;
}

}  // namespace

Verdict verify_L3(const DensityOperator& rho, const WitnessDecomposition& cert,
                  const ProtocolOptions& opts) {
  require(!cert.terms.empty(), ErrorKind::Certificate, "witness has no terms");
  for (const auto& t : cert.terms) {
    require(t.state.num_qubits() == rho.num_qubits(), ErrorKind::Certificate,
            "witness term on " + std::to_string(t.state.num_qubits()) + " qubits, instance has " +
                std::to_string(rho.num_qubits()));
    require(std::isfinite(t.coefficient), ErrorKind::Certificate, "non-finite witness coefficient");
  }
  const auto panel = validity_panel(rho.num_qubits(), opts.panel_size, opts.seed);
  const std::uint64_t k = cert.terms.size();

  Verdict v = start("L3", opts);
  v.copy_budget = k * runs_of(opts);
  const WitnessRun exact = run_witness(rho, cert, panel, 0, opts.seed);
  v.exact_accept_prob = exact.valid && exact.accepted ? 1.0 : 0.0;
  v.transcript.push_back({"exactValid", exact.valid ? 1.0 : 0.0});
  v.transcript.push_back({"exactWorstPanelValue", exact.worst_panel_value});
  if (exact.valid) v.transcript.push_back({"exactStatistic", exact.decision.value});

  if (opts.shots == 0) {
    v.copies_consumed = exact.valid ? k : 0;
    v.transcript.push_back({"panelChecked", static_cast<double>(exact.checked)});
    finish(v, v.exact_accept_prob, opts);
    return v;
  }
  const WitnessRun sampled = run_witness(rho, cert, panel, opts.shots, opts.seed);
  v.copies_consumed = sampled.valid ? k * opts.shots : 0;
  v.sampled_accept_freq = sampled.valid && sampled.accepted ? 1.0 : 0.0;
  v.transcript.push_back({"panelChecked", static_cast<double>(sampled.checked)});
  v.transcript.push_back({"valid", sampled.valid ? 1.0 : 0.0});
  v.transcript.push_back({"worstPanelValue", sampled.worst_panel_value});
  if (sampled.valid) {
    v.transcript.push_back({"statistic", sampled.decision.value});
    v.transcript.push_back({"sigma", sampled.decision.sigma});
  }
  finish(v, *v.sampled_accept_freq, opts);
  return v;
}

// --------------------------------------------------------------------- L4

std::string MerlinStrategy::tag() const {
  auto with = [this](const char* name) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.6g", parameter);
    return std::string(name) + ":" + buf.data();
  };
  switch (mode) {
    case StrategyMode::Honest: return "honest";
    case StrategyMode::Identity: return "identity";
    case StrategyMode::OtherReflection: return with("other-reflection");
    case StrategyMode::ComplementPhase: return with("complement-phase");
    case StrategyMode::ComplementUnitary: return "complement-unitary";
    case StrategyMode::HaarRandom: return "haar";
    case StrategyMode::GlobalPhase: return with("global-phase");
  }
  return "?";
}

MerlinStrategy MerlinStrategy::parse(std::string_view tag) {
  const auto colon = tag.find(':');
  const auto name = tag.substr(0, colon);
  double param = 0.0;
  const bool has_param = colon != std::string_view::npos;
  if (has_param) {
    const std::string text(tag.substr(colon + 1));
    try {
      std::size_t used = 0;
      param = std::stod(text, &used);
      require(used == text.size(), ErrorKind::Argument, "trailing characters");
    } catch (const std::exception&) {
      fail(ErrorKind::Argument, "bad strategy parameter in '" + std::string(tag) + "'");
    }
  }
  auto needs_param = [&](StrategyMode mode, double fallback) {
    return MerlinStrategy{mode, has_param ? param : fallback};
  };
  if (name == "honest") return {StrategyMode::Honest, 0.0};
  if (name == "identity") return {StrategyMode::Identity, 0.0};
  if (name == "other-reflection") return needs_param(StrategyMode::OtherReflection, 0.9);
  if (name == "complement-phase") return needs_param(StrategyMode::ComplementPhase, std::numbers::pi / 2);
  if (name == "complement-unitary") return {StrategyMode::ComplementUnitary, 0.0};
  if (name == "haar") return {StrategyMode::HaarRandom, 0.0};
  if (name == "global-phase") return needs_param(StrategyMode::GlobalPhase, 0.7);
  fail(ErrorKind::Argument, "unknown Merlin strategy '" + std::string(tag) + "'");
}

bool MerlinStrategy::is_cheat() const noexcept {
  if (mode == StrategyMode::Honest || mode == StrategyMode::GlobalPhase) return false;
  if (mode == StrategyMode::ComplementPhase) {
    const double wrapped = std::remainder(parameter - std::numbers::pi, 2 * std::numbers::pi);
    return std::abs(wrapped) > 1e-12;
  }
  return true;
}

std::vector<MerlinStrategy> merlin_L4_cheat_library() {
  return {
      {StrategyMode::Identity, 0.0},
      {StrategyMode::OtherReflection, 0.9},
      {StrategyMode::ComplementPhase, std::numbers::pi / 2},
      {StrategyMode::ComplementUnitary, 0.0},
      {StrategyMode::HaarRandom, 0.0},
  };
}

namespace {

Circuit whole_register(Matrix u, int n) {
  Circuit c(n);
  std::vector<int> targets(static_cast<std::size_t>(n));
  std::iota(targets.begin(), targets.end(), 0);
  c.add(Gate::unitary(std::move(u), std::move(targets)));
  return c;
}

// Unit vector orthogonal to phi drawn from the Haar measure on the complement.
PureState random_orthogonal(const PureState& phi, std::uint64_t seed) {
  const auto xi = random_pure_state(phi.num_qubits(), seed);
  Vector v = xi.amplitudes() - inner_product(phi, xi) * phi.amplitudes();
  return PureState::normalized(std::move(v));
}

// Orthonormal basis of the complement of phi as matrix columns.
Matrix complement_basis(const PureState& phi) {
  const auto d = static_cast<Eigen::Index>(phi.dim());
  const Matrix projector = Matrix::Identity(d, d) - phi.amplitudes() * phi.amplitudes().adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(projector);
  // Eigenvalues ascend: one 0 (phi) followed by d-1 ones.
  return eig.eigenvectors().rightCols(d - 1);
}

}  // namespace

Circuit reflection_certificate(const MerlinStrategy& strategy, const PureState& phi,
                               std::uint64_t seed) {
  const int n = phi.num_qubits();
  const auto d = static_cast<Eigen::Index>(phi.dim());
  const Matrix projector = phi.amplitudes() * phi.amplitudes().adjoint();
  const Matrix identity = Matrix::Identity(d, d);
  const std::uint64_t s = derive_seed(seed, kCheat);
  switch (strategy.mode) {
    case StrategyMode::Honest:
      return whole_register(reflection_matrix(phi), n);
    case StrategyMode::Identity:
      return Circuit(n);
    case StrategyMode::OtherReflection: {
      const double f = strategy.parameter;
      require(f >= 0.0 && f <= 1.0, ErrorKind::Argument, "overlap must lie in [0, 1]");
      const auto chi = random_orthogonal(phi, s);
      Vector psi = std::sqrt(f) * phi.amplitudes() + std::sqrt(1.0 - f) * chi.amplitudes();
      return whole_register(reflection_matrix(PureState::normalized(std::move(psi))), n);
    }
    case StrategyMode::ComplementPhase: {
      const Complex phase = std::polar(1.0, strategy.parameter);
      return whole_register(projector + phase * (identity - projector), n);
    }
    case StrategyMode::ComplementUnitary: {
      const Matrix q = complement_basis(phi);
      const Matrix v = random_unitary(static_cast<std::size_t>(d - 1), s);
      Matrix u = projector + q * v * q.adjoint();
      return whole_register(std::move(u), n);
    }
    case StrategyMode::HaarRandom:
      return whole_register(random_unitary(phi.dim(), s), n);
    case StrategyMode::GlobalPhase:
      return whole_register(std::polar(1.0, strategy.parameter) * reflection_matrix(phi), n);
  }
  fail(ErrorKind::Argument, "unknown strategy");
}

namespace {

struct ProbeChecks {
  bool passed = true;
  int failures = 0;
  int first_failure = -1;
  std::vector<Statistic> stats;
};

ProbeChecks run_probes(const PureState& phi, const Circuit& cert, const ProtocolOptions& opts,
                       std::uint64_t shots) {
  ProbeChecks out;
  for (int j = 0; j < opts.repetitions; ++j) {
    const auto uj = static_cast<std::uint64_t>(j);
    const auto xi = random_pure_state(phi.num_qubits(), derive_seed(opts.seed, kProbe, uj));
    const auto xo = evolve(cert, xi);
    double o1, o2, o3, tau2, tau3;
    if (shots == 0) {
      o1 = overlap(xi, phi);
      o2 = overlap(xo, phi);
      o3 = overlap(xo, xi);
      tau2 = tau3 = opts.tolerance;
    } else {
      const std::uint64_t base = derive_seed(opts.seed, kProbeShots, uj);
      const auto e1 = estimate_from_p0(swap_test_p0(xi, phi), shots, derive_seed(base, 1));
      const auto e2 = estimate_from_p0(swap_test_p0(xo, phi), shots, derive_seed(base, 2));
      const auto e3 = estimate_from_p0(swap_test_p0(xo, xi), shots, derive_seed(base, 3));
      o1 = e1.value;
      o2 = e2.value;
      o3 = e3.value;
      const double slope = 4.0 * (2.0 * o1 - 1.0);
      tau2 = 3.0 * std::sqrt(e1.variance + e2.variance);
      tau3 = 3.0 * std::sqrt(e3.variance + slope * slope * e1.variance);
    }
    const double expected3 = (2.0 * o1 - 1.0) * (2.0 * o1 - 1.0);
    const bool ok = std::abs(o2 - o1) <= tau2 && std::abs(o3 - expected3) <= tau3;
    const std::string idx = "[" + std::to_string(j) + "]";
    out.stats.push_back({"O1" + idx, o1});
    out.stats.push_back({"O2" + idx, o2});
    out.stats.push_back({"O3" + idx, o3});
    if (!ok) {
      ++out.failures;
      if (out.first_failure < 0) out.first_failure = j;
      out.passed = false;
    }
  }
  return out;
}

void check_reflection_certificate(const PureState& phi, const Circuit& cert) {
  require(cert.num_qubits() == phi.num_qubits(), ErrorKind::Certificate,
          "certificate network acts on " + std::to_string(cert.num_qubits()) +
              " qubits, instance has " + std::to_string(phi.num_qubits()));
}

}  // namespace

Verdict verify_L4(const PureState& phi, const Circuit& cert, const ProtocolOptions& opts) {
  check_options(opts);
  check_reflection_certificate(phi, cert);
  Verdict v = start("L4", opts);
  const auto probes = static_cast<std::uint64_t>(opts.repetitions);
  v.copy_budget = 2 * probes * runs_of(opts);
  v.transcript.push_back({"certificateGates", static_cast<double>(cert.gates().size())});

  const ProbeChecks exact = run_probes(phi, cert, opts, 0);
  v.exact_accept_prob = exact.passed ? 1.0 : 0.0;
  v.transcript.push_back({"exactFailures", static_cast<double>(exact.failures)});
  v.transcript.push_back({"exactFirstFailure", static_cast<double>(exact.first_failure)});
  if (opts.shots == 0) {
    v.copies_consumed = 2 * probes;
    v.transcript.insert(v.transcript.end(), exact.stats.begin(), exact.stats.end());
    finish(v, v.exact_accept_prob, opts);
    return v;
  }
  const ProbeChecks sampled = run_probes(phi, cert, opts, opts.shots);
  v.copies_consumed = 2 * probes * opts.shots;
  v.sampled_accept_freq = sampled.passed ? 1.0 : 0.0;
  v.transcript.push_back({"failures", static_cast<double>(sampled.failures)});
  v.transcript.push_back({"firstFailure", static_cast<double>(sampled.first_failure)});
  v.transcript.insert(v.transcript.end(), sampled.stats.begin(), sampled.stats.end());
  finish(v, *v.sampled_accept_freq, opts);
  return v;
}

// --------------------------------------------------------------------- L5

namespace {

Circuit checker_around(Gate controlled, int n) {
  Circuit c(n + 1);
  c.add(Gate::hadamard(n));
  c.add(std::move(controlled));
  c.add(Gate::hadamard(n));
  c.measure({n});
  return c;
}

constexpr int kMaxCheckerRegister = 6;

}  // namespace

Circuit build_checker_from_reflection(const PureState& phi) {
  return checker_around(controlled_reflection(phi), phi.num_qubits());
}

Circuit build_checker(const Circuit& reflection) {
  const int n = reflection.num_qubits();
  require(n <= kMaxCheckerRegister, ErrorKind::Resource,
          "checker limited to " + std::to_string(kMaxCheckerRegister) + " qubits");
  std::vector<int> targets(static_cast<std::size_t>(n + 1));
  std::iota(targets.begin(), targets.end(), 0);
  return checker_around(Gate::unitary(controlled_block(circuit_unitary(reflection)), std::move(targets)), n);
}

namespace {

// Probability of the wrong flag: 1 on phi itself, 0 on states orthogonal to it.
struct CheckerTests {
  bool passed = true;
  double worst_wrong = 0.0;
};

CheckerTests run_checker(const Circuit& checker, const PureState& phi, const ProtocolOptions& opts,
                         std::uint64_t shots) {
  CheckerTests out;
  auto test = [&](const PureState& input, std::size_t wrong_outcome, std::uint64_t seed) {
    const auto dist = outcome_distribution(checker, tensor(input, PureState::zeros(1)));
    double wrong = dist[wrong_outcome];
    if (shots > 0) {
      const double zeros = sample_zero_frequency(dist[0], shots, seed);
      wrong = wrong_outcome == 0 ? zeros : 1.0 - zeros;
    }
    out.worst_wrong = std::max(out.worst_wrong, wrong);
    if (wrong > opts.tolerance) out.passed = false;
  };
  test(phi, 1, derive_seed(opts.seed, kCheckerShots, 0));
  for (int j = 0; j < opts.repetitions; ++j) {
    const auto uj = static_cast<std::uint64_t>(j);
    const auto psi = random_orthogonal(phi, derive_seed(opts.seed, kCheckerProbe, uj));
    test(psi, 0, derive_seed(opts.seed, kCheckerShots, uj + 1));
  }
  return out;
}

}  // namespace

Verdict verify_L5(const PureState& phi, const Circuit& cert, const ProtocolOptions& opts) {
  Verdict v = verify_L4(phi, cert, opts);
  v.protocol = "L5";
  const Circuit checker = build_checker(cert);
  v.copy_budget += runs_of(opts);

  const CheckerTests exact = run_checker(checker, phi, opts, 0);
  v.transcript.push_back({"checkerExactWorstWrongFlag", exact.worst_wrong});
  if (!exact.passed) v.exact_accept_prob = 0.0;
  if (opts.shots == 0) {
    v.copies_consumed += 1;
    finish(v, v.exact_accept_prob, opts);
    return v;
  }
  const CheckerTests sampled = run_checker(checker, phi, opts, opts.shots);
  v.copies_consumed += opts.shots;
  v.transcript.push_back({"checkerWorstWrongFlag", sampled.worst_wrong});
  if (!sampled.passed) v.sampled_accept_freq = 0.0;
  finish(v, *v.sampled_accept_freq, opts);
  return v;
}

std::uint64_t required_repetitions(double gap, double error_bound) {
  require(gap > 0.0 && gap <= 1.0, ErrorKind::Argument, "gap must lie in (0, 1]");
  require(error_bound > 0.0 && error_bound <= 1.0, ErrorKind::Argument,
          "error bound must lie in (0, 1]");
  const double rate = 2.0 * (gap / 2.0) * (gap / 2.0);
  auto bound = [rate](std::uint64_t m) { return std::exp(-rate * static_cast<double>(m)); };
  auto m = static_cast<std::uint64_t>(std::ceil(std::log(1.0 / error_bound) / rate));
  m = std::max<std::uint64_t>(m, 1);
  while (m > 1 && bound(m - 1) <= error_bound) --m;
  while (bound(m) > error_bound) ++m;
  return m;
}

}  // namespace qlang
