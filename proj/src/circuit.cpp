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

#include "qlang/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlang/error.hpp"
#include "qlang/rng.hpp"

namespace qlang {

const char* to_string(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::Hadamard: return "H";
    case GateKind::PauliX: return "X";
    case GateKind::ControlledSwapBlock: return "CSWAP";
    case GateKind::ToffoliType: return "TOFFOLI";
    case GateKind::QubitPermutation: return "PERM";
    case GateKind::RawUnitary: return "UNITARY";
  }
  return "?";
}

namespace {

constexpr double kUnitaryTolerance = 1e-9;
constexpr int kMaxSwapRegister = 6;

void check_distinct(const std::vector<int>& targets) {
  auto sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorKind::Argument,
          "gate targets must be distinct");
  require(sorted.empty() || sorted.front() >= 0, ErrorKind::Argument,
          "gate targets must be nonnegative");
}

const Matrix& hadamard_matrix() {
  static const Matrix h = [] {
    Matrix m(2, 2);
    const double s = std::numbers::sqrt2 / 2.0;
    m << s, s, s, -s;
    return m;
  }();
  return h;
}

}  // namespace

Gate::Gate(GateKind kind, std::vector<int> targets, Matrix payload)
    : kind_(kind), targets_(std::move(targets)), payload_(std::move(payload)) {
  require(!targets_.empty(), ErrorKind::Argument, "gate needs at least one target");
  check_distinct(targets_);
}

Gate Gate::hadamard(int qubit) { return Gate(GateKind::Hadamard, {qubit}); }

Gate Gate::pauli_x(int qubit) { return Gate(GateKind::PauliX, {qubit}); }

Gate Gate::controlled_swap(int control, std::vector<int> register_a, std::vector<int> register_b) {
  require(!register_a.empty() && register_a.size() == register_b.size(), ErrorKind::Argument,
          "controlled swap needs two nonempty registers of equal size");
  std::vector<int> targets{control};
  targets.insert(targets.end(), register_a.begin(), register_a.end());
  targets.insert(targets.end(), register_b.begin(), register_b.end());
  return Gate(GateKind::ControlledSwapBlock, std::move(targets));
}

Gate Gate::toffoli(std::vector<int> controls, int target) {
  controls.push_back(target);
  return Gate(GateKind::ToffoliType, std::move(controls));
}

Gate Gate::permutation(std::vector<int> order) {
  return Gate(GateKind::QubitPermutation, std::move(order));
}

Gate Gate::unitary(Matrix payload, std::vector<int> targets) {
  const auto k = static_cast<int>(targets.size());
  require(payload.rows() == payload.cols() &&
              payload.rows() == static_cast<Eigen::Index>(dimension_of(k)),
          ErrorKind::Argument,
          "unitary payload must be 2^k x 2^k for k = " + std::to_string(k) + " targets");
  const auto d = payload.rows();
  const double defect = (payload.adjoint() * payload - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  require(defect <= kUnitaryTolerance, ErrorKind::Argument,
          "payload is not unitary (defect " + std::to_string(defect) + ")");
  return Gate(GateKind::RawUnitary, std::move(targets), std::move(payload));
}

void Gate::check_fits(int num_qubits) const {
  for (int q : targets_)
    require(q < num_qubits, ErrorKind::Argument,
            std::string(to_string(kind_)) + " target " + std::to_string(q) +
                " out of range for " + std::to_string(num_qubits) + " qubits");
  if (kind_ == GateKind::QubitPermutation)
    require(static_cast<int>(targets_.size()) == num_qubits, ErrorKind::Argument,
            "PERM must list all " + std::to_string(num_qubits) + " qubits");
  if (kind_ == GateKind::ControlledSwapBlock)
    require(targets_.size() % 2 == 1, ErrorKind::Argument, "malformed controlled swap");
}

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
  require(num_qubits >= 1 && num_qubits <= kDefaultMaxQubits, ErrorKind::Resource,
          "circuit qubit count " + std::to_string(num_qubits) + " outside [1, " +
              std::to_string(kDefaultMaxQubits) + "]");
}

Circuit& Circuit::add(Gate gate) {
  gate.check_fits(num_qubits_);
  gates_.push_back(std::move(gate));
  return *this;
}

Circuit& Circuit::measure(std::vector<int> qubits) {
  detail::check_qubit_list(qubits, num_qubits_, false);
  measured_ = std::move(qubits);
  return *this;
}

namespace {

inline std::size_t bit_mask(int qubit, int n) { return std::size_t{1} << (n - 1 - qubit); }

// Basis permutation induced by a classical-reversible gate: G|i> = |map[i]>.
std::vector<std::size_t> basis_map(const Gate& g, int n) {
  const std::size_t dim = dimension_of(n);
  std::vector<std::size_t> map(dim);
  const auto& t = g.targets();
  switch (g.kind()) {
    case GateKind::PauliX: {
      const std::size_t m = bit_mask(t[0], n);
      for (std::size_t i = 0; i < dim; ++i) map[i] = i ^ m;
      break;
    }
    case GateKind::ToffoliType: {
      std::size_t controls = 0;
      for (std::size_t k = 0; k + 1 < t.size(); ++k) controls |= bit_mask(t[k], n);
      const std::size_t target = bit_mask(t.back(), n);
      for (std::size_t i = 0; i < dim; ++i) map[i] = (i & controls) == controls ? i ^ target : i;
      break;
    }
    case GateKind::ControlledSwapBlock: {
      const std::size_t control = bit_mask(t[0], n);
      const std::size_t k = (t.size() - 1) / 2;
      for (std::size_t i = 0; i < dim; ++i) {
        std::size_t out = i;
        if (i & control) {
          for (std::size_t r = 0; r < k; ++r) {
            const std::size_t ma = bit_mask(t[1 + r], n);
            const std::size_t mb = bit_mask(t[1 + k + r], n);
            const bool ba = (i & ma) != 0;
            const bool bb = (i & mb) != 0;
            if (ba != bb) out ^= ma | mb;
          }
        }
        map[i] = out;
      }
      break;
    }
    case GateKind::QubitPermutation: {
      for (std::size_t i = 0; i < dim; ++i) {
        std::size_t out = 0;
        for (int j = 0; j < n; ++j)
          if (i & bit_mask(t[static_cast<std::size_t>(j)], n)) out |= bit_mask(j, n);
        map[i] = out;
      }
      break;
    }
    default:
      fail(ErrorKind::Argument, "gate is not a basis permutation");
  }
  return map;
}

bool is_dense(GateKind kind) { return kind == GateKind::Hadamard || kind == GateKind::RawUnitary; }

const Matrix& dense_matrix(const Gate& g) {
  return g.kind() == GateKind::Hadamard ? hadamard_matrix() : g.payload();
}

// Applies a k-qubit matrix to every strided vector slice of `data`.
class LocalKernel {
 public:
  LocalKernel(const Matrix& u, const std::vector<int>& targets, int n)
      : u_(u),
        local_(detail::scatter_table(targets, n)),
        rest_(detail::scatter_table(detail::complement(targets, n), n)),
        buffer_(static_cast<Eigen::Index>(local_.size())) {}

  void apply(Complex* data, Eigen::Index stride) {
    const auto d = static_cast<Eigen::Index>(local_.size());
    for (std::size_t r : rest_) {
      for (Eigen::Index a = 0; a < d; ++a)
        buffer_(a) = data[static_cast<Eigen::Index>(r | local_[static_cast<std::size_t>(a)]) * stride];
      for (Eigen::Index a = 0; a < d; ++a) {
        Complex sum = 0.0;
        for (Eigen::Index b = 0; b < d; ++b) sum += u_(a, b) * buffer_(b);
        data[static_cast<Eigen::Index>(r | local_[static_cast<std::size_t>(a)]) * stride] = sum;
      }
    }
  }

 private:
  Matrix u_;
  std::vector<std::size_t> local_;
  std::vector<std::size_t> rest_;
  Vector buffer_;
};

}  // namespace

void apply_gate(const Gate& gate, int num_qubits, Vector& state) {
  gate.check_fits(num_qubits);
  require(state.size() == static_cast<Eigen::Index>(dimension_of(num_qubits)), ErrorKind::Argument,
          "state size does not match circuit");
  if (is_dense(gate.kind())) {
    LocalKernel kernel(dense_matrix(gate), gate.targets(), num_qubits);
    kernel.apply(state.data(), 1);
    return;
  }
  const auto map = basis_map(gate, num_qubits);
  Vector out(state.size());
  for (std::size_t i = 0; i < map.size(); ++i)
    out(static_cast<Eigen::Index>(map[i])) = state(static_cast<Eigen::Index>(i));
  state = std::move(out);
}

void apply_gate(const Gate& gate, int num_qubits, Matrix& rho) {
  gate.check_fits(num_qubits);
  const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits));
  require(rho.rows() == d && rho.cols() == d, ErrorKind::Argument,
          "density size does not match circuit");
  if (is_dense(gate.kind())) {
    // U rho U^dagger: U on every column, then conj(U) on every row.
    LocalKernel left(dense_matrix(gate), gate.targets(), num_qubits);
    for (Eigen::Index j = 0; j < d; ++j) left.apply(rho.col(j).data(), 1);
    LocalKernel right(dense_matrix(gate).conjugate(), gate.targets(), num_qubits);
    for (Eigen::Index i = 0; i < d; ++i) right.apply(rho.data() + i, d);
    return;
  }
  const auto map = basis_map(gate, num_qubits);
  Matrix out(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i)
      out(static_cast<Eigen::Index>(map[static_cast<std::size_t>(i)]),
          static_cast<Eigen::Index>(map[static_cast<std::size_t>(j)])) = rho(i, j);
  rho = std::move(out);
}

PureState evolve(const Circuit& c, const PureState& input) {
  require(input.num_qubits() == c.num_qubits(), ErrorKind::Argument,
          "input has " + std::to_string(input.num_qubits()) + " qubits, circuit has " +
              std::to_string(c.num_qubits()));
  Vector v = input.amplitudes();
  for (const auto& g : c.gates()) apply_gate(g, c.num_qubits(), v);
  return PureState::normalized(std::move(v));
}

DensityOperator evolve_exact(const Circuit& c, const DensityOperator& input) {
  require(input.num_qubits() == c.num_qubits(), ErrorKind::Argument,
          "input has " + std::to_string(input.num_qubits()) + " qubits, circuit has " +
              std::to_string(c.num_qubits()));
  Matrix rho = input.matrix();
  for (const auto& g : c.gates()) apply_gate(g, c.num_qubits(), rho);
  return DensityOperator::from_trusted(std::move(rho));
}

Matrix circuit_unitary(const Circuit& c) {
  const auto d = static_cast<Eigen::Index>(dimension_of(c.num_qubits()));
  Matrix u = Matrix::Identity(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    Vector col = u.col(j);
    for (const auto& g : c.gates()) apply_gate(g, c.num_qubits(), col);
    u.col(j) = col;
  }
  return u;
}

namespace {

std::vector<double> distribution_from_diagonal(const Circuit& c, const Eigen::VectorXd& diag) {
  const auto& meas = c.measured();
  require(!meas.empty(), ErrorKind::Argument, "circuit has no measured qubits");
  const int n = c.num_qubits();
  std::vector<double> probs(dimension_of(static_cast<int>(meas.size())), 0.0);
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    std::size_t outcome = 0;
    for (int q : meas) outcome = (outcome << 1) | ((static_cast<std::size_t>(i) >> (n - 1 - q)) & 1U);
    probs[outcome] += diag(i);
  }
  for (double& p : probs) p = std::clamp(p, 0.0, 1.0);
  return probs;
}

std::size_t outcome_index(const Circuit& c, std::string_view bits) {
  require(bits.size() == c.measured().size(), ErrorKind::Argument,
          "outcome has " + std::to_string(bits.size()) + " bits, circuit measures " +
              std::to_string(c.measured().size()));
  std::size_t index = 0;
  for (char b : bits) {
    require(b == '0' || b == '1', ErrorKind::Argument, "outcome bits must be 0 or 1");
    index = (index << 1) | static_cast<std::size_t>(b == '1');
  }
  return index;
}

std::string outcome_bits(std::size_t index, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t k = 0; k < width; ++k)
    if ((index >> (width - 1 - k)) & 1U) s[k] = '1';
  return s;
}

}  // namespace

std::vector<double> outcome_distribution(const Circuit& c, const DensityOperator& input) {
  const auto out = evolve_exact(c, input);
  return distribution_from_diagonal(c, out.matrix().diagonal().real());
}

std::vector<double> outcome_distribution(const Circuit& c, const PureState& input) {
  const auto out = evolve(c, input);
  return distribution_from_diagonal(c, out.amplitudes().cwiseAbs2());
}

double probability_of_outcome(const Circuit& c, const DensityOperator& input, std::string_view bits) {
  const auto index = outcome_index(c, bits);
  return outcome_distribution(c, input)[index];
}

double probability_of_outcome(const Circuit& c, const PureState& input, std::string_view bits) {
  const auto index = outcome_index(c, bits);
  return outcome_distribution(c, input)[index];
}

OutcomeSampler::OutcomeSampler(std::vector<double> probabilities) {
  require(!probabilities.empty(), ErrorKind::Argument, "empty distribution");
  const double largest = *std::max_element(probabilities.begin(), probabilities.end());
  double total = 0.0;
  cdf_.reserve(probabilities.size());
  for (double p : probabilities) {
    // Round-off residue on impossible outcomes must never be drawn.
    if (p < 1e-14 * largest) p = 0.0;
    total += p;
    cdf_.push_back(total);
  }
  require(total > 0.0, ErrorKind::Argument, "distribution has no mass");
  for (double& v : cdf_) v /= total;
}

std::size_t OutcomeSampler::draw(double uniform) const noexcept {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), uniform);
  if (it == cdf_.end()) {
    // uniform can only exceed the final (rounded) cdf value by round-off.
    return static_cast<std::size_t>(std::distance(
        cdf_.begin(), std::lower_bound(cdf_.begin(), cdf_.end(), cdf_.back())));
  }
  return static_cast<std::size_t>(std::distance(cdf_.begin(), it));
}

ShotResult sample_shots(const Circuit& c, const DensityOperator& input, std::uint64_t shots,
                        std::uint64_t seed) {
  require(shots >= 1, ErrorKind::Argument, "shots must be at least 1");
  const OutcomeSampler sampler(outcome_distribution(c, input));
  std::vector<std::uint64_t> counts(sampler.size(), 0);
  CounterRng rng(seed, 0);
  for (std::uint64_t s = 0; s < shots; ++s) ++counts[sampler.draw(rng.uniform())];
  ShotResult result;
  result.shots = shots;
  result.seed = seed;
  for (std::size_t k = 0; k < counts.size(); ++k)
    if (counts[k] > 0) result.outcomes[outcome_bits(k, c.measured().size())] = counts[k];
  return result;
}

Circuit build_estimation_network(int n) {
  require(n >= 1, ErrorKind::Argument, "estimation network needs n >= 1");
  require(n <= kMaxSwapRegister, ErrorKind::Resource,
          "estimation network register size " + std::to_string(n) + " exceeds " +
              std::to_string(kMaxSwapRegister));
  Circuit c(2 * n + 1);
  std::vector<int> a(static_cast<std::size_t>(n));
  std::vector<int> b(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    a[static_cast<std::size_t>(k)] = 1 + k;
    b[static_cast<std::size_t>(k)] = 1 + n + k;
  }
  c.add(Gate::hadamard(0));
  c.add(Gate::controlled_swap(0, std::move(a), std::move(b)));
  c.add(Gate::hadamard(0));
  c.measure({0});
  return c;
}

double swap_test_p0(const DensityOperator& a, const DensityOperator& b) {
  require(a.num_qubits() == b.num_qubits(), ErrorKind::Argument,
          "swap test registers differ in size");
  const Circuit network = build_estimation_network(a.num_qubits());
  const auto input = tensor(tensor(DensityOperator::from_pure(PureState::zeros(1)), a), b);
  return outcome_distribution(network, input)[0];
}

double swap_test_p0(const PureState& a, const PureState& b) {
  require(a.num_qubits() == b.num_qubits(), ErrorKind::Argument,
          "swap test registers differ in size");
  const Circuit network = build_estimation_network(a.num_qubits());
  const auto input = tensor(tensor(PureState::zeros(1), a), b);
  return outcome_distribution(network, input)[0];
}

PurityPlan::PurityPlan(int register_size, int repetitions)
    : m_(register_size), reps_(repetitions), network_(build_estimation_network(register_size)) {
  require(repetitions >= 1, ErrorKind::Argument, "repetition count must be at least 1");
}

double PurityPlan::control_p0(const DensityOperator& rho) const {
  require(rho.num_qubits() == m_, ErrorKind::Argument, "register size mismatch");
  return swap_test_p0(rho, rho);
}

double PurityPlan::flag_probability(const DensityOperator& rho) const {
  return std::pow(control_p0(rho), reps_);
}

std::pair<bool, int> PurityPlan::sample_run(double p0, std::uint64_t seed,
                                            std::uint64_t run_index) const {
  const OutcomeSampler control({p0, 1.0 - p0});
  CounterRng rng(seed, run_index);
  for (int k = 0; k < reps_; ++k)
    if (control.draw(rng.uniform()) != 0) return {false, k + 1};
  return {true, reps_};
}

Circuit PurityPlan::monolithic_circuit() const {
  const int block = 2 * m_ + 1;
  const int flag = reps_ * block;
  Circuit c(flag + 1);
  std::vector<int> controls;
  for (int r = 0; r < reps_; ++r) {
    const int base = r * block;
    std::vector<int> a;
    std::vector<int> b;
    for (int k = 0; k < m_; ++k) {
      a.push_back(base + 1 + k);
      b.push_back(base + 1 + m_ + k);
    }
    c.add(Gate::hadamard(base));
    c.add(Gate::controlled_swap(base, std::move(a), std::move(b)));
    c.add(Gate::hadamard(base));
    controls.push_back(base);
  }
  // Outcome 0 on a control signals purity, so negate before the conjunction.
  for (int q : controls) c.add(Gate::pauli_x(q));
  c.add(Gate::toffoli(controls, flag));
  c.measure({flag});
  return c;
}

DensityOperator PurityPlan::monolithic_input(const DensityOperator& rho) const {
  require(rho.num_qubits() == m_, ErrorKind::Argument, "register size mismatch");
  const auto zero = DensityOperator::from_pure(PureState::zeros(1));
  const auto block = tensor(tensor(zero, rho), rho);
  auto input = block;
  for (int r = 1; r < reps_; ++r) input = tensor(input, block);
  return tensor(input, zero);
}

PurityPlan build_purity_circuit(int register_size, int repetitions) {
  return PurityPlan(register_size, repetitions);
}

Gate subset_permutation(std::string_view subset) {
  std::vector<int> ones;
  std::vector<int> zeros;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    require(subset[i] == '0' || subset[i] == '1', ErrorKind::Argument,
            "subset string may contain only 0 and 1");
    (subset[i] == '1' ? ones : zeros).push_back(static_cast<int>(i));
  }
  require(!ones.empty() && !zeros.empty(), ErrorKind::Argument,
          "subset string must contain both a 1 and a 0");
  ones.insert(ones.end(), zeros.begin(), zeros.end());
  return Gate::permutation(std::move(ones));
}

DensityOperator subset_extract(const PureState& phi, std::string_view subset) {
  require(static_cast<int>(subset.size()) == phi.num_qubits(), ErrorKind::Argument,
          "subset string length " + std::to_string(subset.size()) + " differs from " +
              std::to_string(phi.num_qubits()) + " qubits");
  Gate perm = subset_permutation(subset);
  Circuit c(phi.num_qubits());
  c.add(std::move(perm));
  const auto moved = evolve(c, phi);
  const auto k = static_cast<int>(std::count(subset.begin(), subset.end(), '1'));
  std::vector<int> front(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) front[static_cast<std::size_t>(i)] = i;
  return partial_trace(moved, front);
}

Matrix controlled_block(const Matrix& u) {
  const auto d = u.rows();
  Matrix out = Matrix::Zero(2 * d, 2 * d);
  for (Eigen::Index r = 0; r < d; ++r) {
    out(2 * r, 2 * r) = 1.0;
    for (Eigen::Index s = 0; s < d; ++s) out(2 * r + 1, 2 * s + 1) = u(r, s);
  }
  return out;
}

Matrix reflection_matrix(const PureState& phi) {
  const auto d = static_cast<Eigen::Index>(phi.dim());
  return 2.0 * phi.amplitudes() * phi.amplitudes().adjoint() - Matrix::Identity(d, d);
}

Gate controlled_reflection(const PureState& phi) {
  require(phi.num_qubits() <= kMaxSwapRegister, ErrorKind::Resource,
          "controlled reflection limited to " + std::to_string(kMaxSwapRegister) + " qubits");
  std::vector<int> targets(static_cast<std::size_t>(phi.num_qubits() + 1));
  for (std::size_t k = 0; k < targets.size(); ++k) targets[k] = static_cast<int>(k);
  return Gate::unitary(controlled_block(reflection_matrix(phi)), std::move(targets));
}

}  // namespace qlang
