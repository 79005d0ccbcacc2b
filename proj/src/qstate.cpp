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

#include "qlang/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qlang/error.hpp"
#include "qlang/rng.hpp"

namespace qlang {

int qubits_for_dimension(std::size_t dim) noexcept {
  if (dim < 2 || (dim & (dim - 1)) != 0) return -1;
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

namespace detail {

std::size_t scatter_index(std::size_t local, std::span<const int> qubits, int num_qubits) noexcept {
  std::size_t global = 0;
  const std::size_t k = qubits.size();
  for (std::size_t j = 0; j < k; ++j) {
    if ((local >> (k - 1 - j)) & 1U) global |= std::size_t{1} << (num_qubits - 1 - qubits[j]);
  }
  return global;
}

std::vector<std::size_t> scatter_table(std::span<const int> qubits, int num_qubits) {
  std::vector<std::size_t> table(dimension_of(static_cast<int>(qubits.size())));
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = scatter_index(i, qubits, num_qubits);
  return table;
}

std::vector<int> complement(std::span<const int> qubits, int num_qubits) {
  std::vector<bool> used(static_cast<std::size_t>(num_qubits), false);
  for (int q : qubits) used[static_cast<std::size_t>(q)] = true;
  std::vector<int> rest;
  for (int q = 0; q < num_qubits; ++q)
    if (!used[static_cast<std::size_t>(q)]) rest.push_back(q);
  return rest;
}

void check_qubit_list(std::span<const int> qubits, int num_qubits, bool require_sorted) {
  std::vector<bool> seen(static_cast<std::size_t>(num_qubits), false);
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const int q = qubits[i];
    require(q >= 0 && q < num_qubits, ErrorKind::Argument,
            "qubit index " + std::to_string(q) + " out of range for " +
                std::to_string(num_qubits) + " qubits");
    require(!seen[static_cast<std::size_t>(q)], ErrorKind::Argument,
            "duplicate qubit index " + std::to_string(q));
    seen[static_cast<std::size_t>(q)] = true;
    if (require_sorted && i > 0)
      require(qubits[i - 1] < q, ErrorKind::Argument, "qubit list must be strictly increasing");
  }
}

}  // namespace detail

namespace {

int checked_qubits(std::size_t dim, const char* what) {
  const int n = qubits_for_dimension(dim);
  require(n >= 1, ErrorKind::Argument,
          std::string(what) + " dimension " + std::to_string(dim) + " is not 2^n with n >= 1");
  return n;
}

double hermitian_defect(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace

PureState::PureState(Vector amplitudes)
    : num_qubits_(checked_qubits(static_cast<std::size_t>(amplitudes.size()), "state")),
      amplitudes_(std::move(amplitudes)) {
  const double norm = amplitudes_.norm();
  require(std::abs(norm - 1.0) <= kValidationTolerance, ErrorKind::Argument,
          "state norm " + std::to_string(norm) + " differs from 1");
}

PureState PureState::normalized(Vector amplitudes) {
  const double norm = amplitudes.norm();
  require(norm > 0.0 && std::isfinite(norm), ErrorKind::Argument, "cannot normalize a zero vector");
  amplitudes /= norm;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(int num_qubits, std::size_t index) {
  require(num_qubits >= 1, ErrorKind::Argument, "need at least one qubit");
  require(index < dimension_of(num_qubits), ErrorKind::Argument, "basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dimension_of(num_qubits)));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v));
}

DensityOperator::DensityOperator(Matrix matrix, Trusted)
    : num_qubits_(checked_qubits(static_cast<std::size_t>(matrix.rows()), "density operator")),
      matrix_(std::move(matrix)) {
  require(matrix_.rows() == matrix_.cols(), ErrorKind::Argument, "density operator must be square");
  const double defect = hermitian_defect(matrix_);
  require(defect <= kValidationTolerance, ErrorKind::Argument,
          "density operator not Hermitian (defect " + std::to_string(defect) + ")");
  const double tr = matrix_.trace().real();
  require(std::abs(tr - 1.0) <= kValidationTolerance, ErrorKind::Argument,
          "density operator trace " + std::to_string(tr) + " differs from 1");
}

DensityOperator::DensityOperator(Matrix matrix) : DensityOperator(std::move(matrix), Trusted{}) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(matrix_, Eigen::EigenvaluesOnly);
  const double lowest = eig.eigenvalues().minCoeff();
  require(lowest >= -kValidationTolerance, ErrorKind::Argument,
          "density operator has negative eigenvalue " + std::to_string(lowest));
}

DensityOperator DensityOperator::from_trusted(Matrix matrix) {
  return DensityOperator(std::move(matrix), Trusted{});
}

DensityOperator DensityOperator::from_pure(const PureState& state) {
  return DensityOperator(state.amplitudes() * state.amplitudes().adjoint(), Trusted{});
}

DensityOperator DensityOperator::maximally_mixed(int num_qubits) {
  require(num_qubits >= 1, ErrorKind::Argument, "need at least one qubit");
  const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits));
  return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d), Trusted{});
}

Bipartition Bipartition::from_subset(int num_qubits, std::vector<int> subset_a) {
  require(num_qubits >= 2, ErrorKind::Argument, "a bipartition needs at least two qubits");
  std::sort(subset_a.begin(), subset_a.end());
  detail::check_qubit_list(subset_a, num_qubits, true);
  require(!subset_a.empty() && static_cast<int>(subset_a.size()) < num_qubits,
          ErrorKind::Argument, "both sides of a bipartition must be nonempty");
  auto b = detail::complement(subset_a, num_qubits);
  return Bipartition(num_qubits, std::move(subset_a), std::move(b));
}

Bipartition Bipartition::from_string(std::string_view bits) {
  std::vector<int> a;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    require(bits[i] == '0' || bits[i] == '1', ErrorKind::Argument,
            "subset string may contain only 0 and 1");
    if (bits[i] == '1') a.push_back(static_cast<int>(i));
  }
  return from_subset(static_cast<int>(bits.size()), std::move(a));
}

std::string Bipartition::to_string() const {
  std::string s(static_cast<std::size_t>(num_qubits_), '0');
  for (int q : a_) s[static_cast<std::size_t>(q)] = '1';
  return s;
}

std::size_t SchmidtSpectrum::rank(double tolerance) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      coefficients.begin(), coefficients.end(), [&](double c) { return c > tolerance; }));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b, int max_qubits) {
  const int n = a.num_qubits() + b.num_qubits();
  require(n <= max_qubits, ErrorKind::Resource,
          "tensor product of " + std::to_string(n) + " qubits exceeds limit " +
              std::to_string(max_qubits));
  const auto da = a.matrix().rows();
  const auto db = b.matrix().rows();
  Matrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  return DensityOperator::from_trusted(std::move(out));
}

PureState tensor(const PureState& a, const PureState& b, int max_qubits) {
  const int n = a.num_qubits() + b.num_qubits();
  require(n <= max_qubits, ErrorKind::Resource,
          "tensor product of " + std::to_string(n) + " qubits exceeds limit " +
              std::to_string(max_qubits));
  const auto db = static_cast<Eigen::Index>(b.dim());
  Vector out(static_cast<Eigen::Index>(a.dim()) * db);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(a.dim()); ++i)
    out.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  return PureState(std::move(out));
}

namespace {

void check_keep(std::span<const int> keep, int n) {
  require(!keep.empty(), ErrorKind::Argument, "partial trace needs at least one kept qubit");
  detail::check_qubit_list(keep, n, true);
}

}  // namespace

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep) {
  const int n = rho.num_qubits();
  check_keep(keep, n);
  const auto traced = detail::complement(keep, n);
  const auto keep_idx = detail::scatter_table(keep, n);
  const auto trace_idx = detail::scatter_table(traced, n);
  const auto dk = static_cast<Eigen::Index>(keep_idx.size());
  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = rho.matrix();
  for (Eigen::Index j = 0; j < dk; ++j) {
    for (Eigen::Index i = 0; i < dk; ++i) {
      Complex sum = 0.0;
      for (std::size_t t : trace_idx)
        sum += m(static_cast<Eigen::Index>(keep_idx[static_cast<std::size_t>(i)] | t),
                 static_cast<Eigen::Index>(keep_idx[static_cast<std::size_t>(j)] | t));
      out(i, j) = sum;
    }
  }
  return DensityOperator::from_trusted(std::move(out));
}

namespace {

// Amplitudes reshaped to (rows over `rows_q`) x (columns over `cols_q`).
Matrix reshape_amplitudes(const PureState& phi, std::span<const int> rows_q,
                          std::span<const int> cols_q) {
  const int n = phi.num_qubits();
  const auto r_idx = detail::scatter_table(rows_q, n);
  const auto c_idx = detail::scatter_table(cols_q, n);
  Matrix m(static_cast<Eigen::Index>(r_idx.size()), static_cast<Eigen::Index>(c_idx.size()));
  for (std::size_t c = 0; c < c_idx.size(); ++c)
    for (std::size_t r = 0; r < r_idx.size(); ++r)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = phi[r_idx[r] | c_idx[c]];
  return m;
}

}  // namespace

DensityOperator partial_trace(const PureState& phi, std::span<const int> keep) {
  check_keep(keep, phi.num_qubits());
  const auto traced = detail::complement(keep, phi.num_qubits());
  if (traced.empty()) return DensityOperator::from_pure(phi);
  const Matrix m = reshape_amplitudes(phi, keep, traced);
  Matrix rho = m * m.adjoint();
  return DensityOperator::from_trusted(0.5 * (rho + rho.adjoint()));
}

double purity(const DensityOperator& rho) {
  // tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
  return rho.matrix().squaredNorm();
}

double overlap(const DensityOperator& a, const DensityOperator& b) {
  require(a.num_qubits() == b.num_qubits(), ErrorKind::Argument,
          "overlap of states with different qubit counts");
  // tr(ab) = sum_ij a_ij b_ji = sum_ij a_ij conj(b_ij) for Hermitian b.
  return (a.matrix().array() * b.matrix().array().conjugate()).sum().real();
}

Complex inner_product(const PureState& a, const PureState& b) {
  require(a.num_qubits() == b.num_qubits(), ErrorKind::Argument,
          "inner product of states with different qubit counts");
  return a.amplitudes().dot(b.amplitudes());
}

double overlap(const PureState& a, const PureState& b) { return std::norm(inner_product(a, b)); }

SchmidtDecomposition schmidt_decompose(const PureState& phi, const Bipartition& cut) {
  require(cut.num_qubits() == phi.num_qubits(), ErrorKind::Argument,
          "bipartition size does not match the state");
  const Matrix m = reshape_amplitudes(phi, cut.subset_a(), cut.subset_b());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition out;
  const auto& s = svd.singularValues();
  out.spectrum.coefficients.assign(s.data(), s.data() + s.size());
  out.left = svd.matrixU();
  out.right = svd.matrixV().conjugate();
  return out;
}

SchmidtSpectrum schmidt_spectrum(const PureState& phi, const Bipartition& cut) {
  return schmidt_decompose(phi, cut).spectrum;
}

namespace {

Vector complex_normal_vector(std::size_t dim, CounterRng& rng) {
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
  return v;
}

}  // namespace

PureState random_pure_state(int num_qubits, std::uint64_t seed) {
  require(num_qubits >= 1 && num_qubits <= kDefaultMaxQubits, ErrorKind::Argument,
          "random state qubit count out of range");
  CounterRng rng(seed, 0x5747E);
  return PureState::normalized(complex_normal_vector(dimension_of(num_qubits), rng));
}

PureState random_product_state(const Bipartition& cut, std::uint64_t seed) {
  const auto& a = cut.subset_a();
  const auto& b = cut.subset_b();
  const PureState left = random_pure_state(static_cast<int>(a.size()), derive_seed(seed, 1));
  const PureState right = random_pure_state(static_cast<int>(b.size()), derive_seed(seed, 2));
  const PureState joint = tensor(left, right);
  // joint lists subset A first; position k of `order` reads qubit k of the target layout.
  std::vector<int> layout(a.begin(), a.end());
  layout.insert(layout.end(), b.begin(), b.end());
  std::vector<int> order(layout.size());
  for (std::size_t pos = 0; pos < layout.size(); ++pos)
    order[static_cast<std::size_t>(layout[pos])] = static_cast<int>(pos);
  return permute_qubits(joint, order);
}

PureState random_local_product_state(int num_qubits, std::uint64_t seed) {
  require(num_qubits >= 1 && num_qubits <= kDefaultMaxQubits, ErrorKind::Argument,
          "random state qubit count out of range");
  PureState state = random_pure_state(1, derive_seed(seed, 0));
  for (int q = 1; q < num_qubits; ++q)
    state = tensor(state, random_pure_state(1, derive_seed(seed, static_cast<std::uint64_t>(q))));
  return state;
}

DensityOperator random_density_operator(int num_qubits, int rank, std::uint64_t seed) {
  require(num_qubits >= 1 && num_qubits <= kDefaultMaxQubits, ErrorKind::Argument,
          "random density qubit count out of range");
  require(rank >= 1, ErrorKind::Argument, "rank must be positive");
  CounterRng rng(seed, 0xD3);
  const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits));
  Matrix g(d, rank);
  for (Eigen::Index c = 0; c < rank; ++c)
    for (Eigen::Index r = 0; r < d; ++r) g(r, c) = rng.complex_normal();
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(0.5 * (rho + rho.adjoint()));
}

Matrix random_unitary(std::size_t dim, std::uint64_t seed) {
  require(dim >= 1, ErrorKind::Argument, "unitary dimension must be positive");
  CounterRng rng(seed, 0xA11);
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix g(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) g(r, c) = rng.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    const Complex diag = r(i, i);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(i) *= diag / mag;
  }
  return q;
}

namespace {

std::vector<std::size_t> permutation_map(int n, std::span<const int> order) {
  require(static_cast<int>(order.size()) == n, ErrorKind::Argument,
          "qubit permutation must list every qubit");
  detail::check_qubit_list(order, n, false);
  const std::size_t dim = dimension_of(n);
  std::vector<std::size_t> map(dim);
  for (std::size_t in = 0; in < dim; ++in) {
    std::size_t out = 0;
    for (int j = 0; j < n; ++j) {
      const int src = order[static_cast<std::size_t>(j)];
      if ((in >> (n - 1 - src)) & 1U) out |= std::size_t{1} << (n - 1 - j);
    }
    map[in] = out;
  }
  return map;
}

}  // namespace

PureState permute_qubits(const PureState& phi, std::span<const int> order) {
  const auto map = permutation_map(phi.num_qubits(), order);
  Vector out(phi.amplitudes().size());
  for (std::size_t i = 0; i < map.size(); ++i) out(static_cast<Eigen::Index>(map[i])) = phi[i];
  return PureState(std::move(out));
}

DensityOperator permute_qubits(const DensityOperator& rho, std::span<const int> order) {
  const auto map = permutation_map(rho.num_qubits(), order);
  const Matrix& m = rho.matrix();
  Matrix out(m.rows(), m.cols());
  for (std::size_t j = 0; j < map.size(); ++j)
    for (std::size_t i = 0; i < map.size(); ++i)
      out(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) =
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return DensityOperator::from_trusted(std::move(out));
}

Matrix partial_transpose(const Matrix& rho, int num_qubits, std::span<const int> transposed) {
  require(rho.rows() == static_cast<Eigen::Index>(dimension_of(num_qubits)) &&
              rho.cols() == rho.rows(),
          ErrorKind::Argument, "matrix size does not match qubit count");
  detail::check_qubit_list(transposed, num_qubits, false);
  std::size_t mask = 0;
  for (int q : transposed) mask |= std::size_t{1} << (num_qubits - 1 - q);
  Matrix out(rho.rows(), rho.cols());
  for (Eigen::Index j = 0; j < rho.cols(); ++j) {
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      const std::size_t ni = (ui & ~mask) | (uj & mask);
      const std::size_t nj = (uj & ~mask) | (ui & mask);
      out(i, j) = rho(static_cast<Eigen::Index>(ni), static_cast<Eigen::Index>(nj));
    }
  }
  return out;
}

std::optional<PureState> as_pure(const DensityOperator& rho, double tolerance) {
  if (purity(rho) < 1.0 - tolerance) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(rho.matrix());
  const auto top = eig.eigenvalues().size() - 1;
  return PureState::normalized(eig.eigenvectors().col(top));
}

SeparabilityVerdict is_separable_oracle(const PureState& phi, const Bipartition& cut) {
  const auto spectrum = schmidt_spectrum(phi, cut);
  return {spectrum.is_product(), 1.0 - spectrum.largest(), SeparabilityMethod::Schmidt};
}

SeparabilityVerdict is_separable_oracle(const DensityOperator& rho, const Bipartition& cut) {
  require(cut.num_qubits() == rho.num_qubits(), ErrorKind::Argument,
          "bipartition size does not match the state");
  if (auto pure = as_pure(rho)) return is_separable_oracle(*pure, cut);
  const std::size_t da = dimension_of(static_cast<int>(cut.subset_a().size()));
  const std::size_t db = dimension_of(static_cast<int>(cut.subset_b().size()));
  const bool exact = std::min(da, db) == 2 && std::max(da, db) <= 3;
  require(exact, ErrorKind::UnsupportedOracle,
          "mixed-state separability is only decided exactly for 2x2 and 2x3 cuts (got " +
              std::to_string(da) + "x" + std::to_string(db) + ")");
  const Matrix pt = partial_transpose(rho.matrix(), rho.num_qubits(), cut.subset_b());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(pt, Eigen::EigenvaluesOnly);
  const double lowest = eig.eigenvalues().minCoeff();
  return {lowest >= -kValidationTolerance, std::max(0.0, -lowest),
          SeparabilityMethod::PartialTranspose};
}

std::vector<WeightedState> decompose_hermitian(const Matrix& w) {
  require(w.rows() == w.cols() && qubits_for_dimension(static_cast<std::size_t>(w.rows())) >= 1,
          ErrorKind::Argument, "witness must be a square 2^n matrix");
  const double defect = hermitian_defect(w);
  require(defect <= kValidationTolerance, ErrorKind::Argument,
          "matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (w + w.adjoint()));
  const auto& vals = eig.eigenvalues();
  const double scale = vals.cwiseAbs().maxCoeff();
  require(scale > 0.0, ErrorKind::Argument, "cannot decompose the zero operator");
  const double cutoff = 1e-14 * scale;

  std::vector<WeightedState> terms;
  for (const int sign : {+1, -1}) {
    Matrix part = Matrix::Zero(w.rows(), w.cols());
    double weight = 0.0;
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
      const double lambda = sign * vals(k);
      if (lambda <= cutoff) continue;
      part += lambda * eig.eigenvectors().col(k) * eig.eigenvectors().col(k).adjoint();
      weight += lambda;
    }
    if (weight == 0.0) continue;
    part /= weight;
    terms.push_back({sign * weight, DensityOperator(0.5 * (part + part.adjoint()))});
  }
  return terms;
}

Matrix recompose(std::span<const WeightedState> terms) {
  require(!terms.empty(), ErrorKind::Argument, "empty decomposition");
  Matrix w = Matrix::Zero(terms.front().state.matrix().rows(), terms.front().state.matrix().cols());
  for (const auto& t : terms) {
    require(t.state.matrix().rows() == w.rows(), ErrorKind::Argument,
            "decomposition terms have mismatched dimensions");
    w += t.coefficient * t.state.matrix();
  }
  return w;
}

double padded_distance(const PureState& a, const PureState& b) {
  const auto d = static_cast<Eigen::Index>(std::max(a.dim(), b.dim()));
  auto pad = [d](const PureState& s) {
    // Appended |0> qubits are the least significant, so amplitude i moves to
    // index i * 2^extra.
    const auto stride = d / static_cast<Eigen::Index>(s.dim());
    Vector v = Vector::Zero(d);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(s.dim()); ++i)
      v(i * stride) = s.amplitudes()(i);
    return v;
  };
  return (pad(a) - pad(b)).norm();
}

}  // namespace qlang
