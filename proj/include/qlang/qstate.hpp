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

// Dense pure states and density operators over qubit registers.
//
// Qubit 0 is the most significant bit of a basis index everywhere in the
// library: |q0 q1 ... q(n-1)> has index sum_k q_k 2^(n-1-k).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qlang {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr int kDefaultMaxQubits = 14;
inline constexpr double kValidationTolerance = 1e-10;
inline constexpr double kReconstructionTolerance = 1e-9;
/// A Schmidt spectrum is rank one when 1 - lambda_max^2 is below this.
inline constexpr double kProductTolerance = 1e-10;

constexpr std::size_t dimension_of(int num_qubits) noexcept {
  return std::size_t{1} << num_qubits;
}

/// Returns log2(dim) or -1 when dim is not a power of two >= 2.
int qubits_for_dimension(std::size_t dim) noexcept;

class PureState {
 public:
  /// Validates the norm to within kValidationTolerance.
  explicit PureState(Vector amplitudes);

  /// Rescales to unit norm; argument error for the zero vector.
  static PureState normalized(Vector amplitudes);
  static PureState basis(int num_qubits, std::size_t index);
  static PureState zeros(int num_qubits) { return basis(num_qubits, 0); }

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

 private:
  int num_qubits_;
  Vector amplitudes_;
};

class DensityOperator {
 public:
  /// Validates Hermiticity, unit trace and positivity (eigenvalues >= -1e-10).
  explicit DensityOperator(Matrix matrix);

  static DensityOperator from_pure(const PureState& state);
  static DensityOperator maximally_mixed(int num_qubits);

  /// For outputs of maps already known to preserve positivity (unitary
  /// conjugation, partial trace). Checks only Hermiticity and trace, which
  /// keeps construction quadratic in the dimension.
  static DensityOperator from_trusted(Matrix matrix);

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }

 private:
  struct Trusted {};
  DensityOperator(Matrix matrix, Trusted);

  int num_qubits_;
  Matrix matrix_;
};

/// Split of {0..n-1} into two nonempty sorted subsets.
class Bipartition {
 public:
  static Bipartition from_subset(int num_qubits, std::vector<int> subset_a);
  /// '1' at position i puts qubit i in subset A (the subset-string convention).
  static Bipartition from_string(std::string_view bits);

  int num_qubits() const noexcept { return num_qubits_; }
  const std::vector<int>& subset_a() const noexcept { return a_; }
  const std::vector<int>& subset_b() const noexcept { return b_; }
  std::string to_string() const;

  friend bool operator==(const Bipartition&, const Bipartition&) = default;

 private:
  Bipartition(int n, std::vector<int> a, std::vector<int> b)
      : num_qubits_(n), a_(std::move(a)), b_(std::move(b)) {}

  int num_qubits_;
  std::vector<int> a_;
  std::vector<int> b_;
};

struct SchmidtSpectrum {
  std::vector<double> coefficients;  // nonincreasing

  double largest() const noexcept { return coefficients.empty() ? 0.0 : coefficients.front(); }
  std::size_t rank(double tolerance = 1e-8) const noexcept;
  bool is_product() const noexcept {
    return 1.0 - largest() * largest() <= kProductTolerance;
  }
};

struct SchmidtDecomposition {
  SchmidtSpectrum spectrum;
  Matrix left;   // columns are orthonormal states on subset A (in subset order)
  Matrix right;  // columns are orthonormal states on subset B
};

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b,
                       int max_qubits = kDefaultMaxQubits);
PureState tensor(const PureState& a, const PureState& b, int max_qubits = kDefaultMaxQubits);

/// Reduced state on `keep` (strictly increasing, nonempty, in range).
DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep);
DensityOperator partial_trace(const PureState& phi, std::span<const int> keep);

double purity(const DensityOperator& rho);

/// tr(a b).
double overlap(const DensityOperator& a, const DensityOperator& b);
/// |<a|b>|^2.
double overlap(const PureState& a, const PureState& b);
/// <a|b>, conjugate-linear in a.
Complex inner_product(const PureState& a, const PureState& b);

SchmidtSpectrum schmidt_spectrum(const PureState& phi, const Bipartition& cut);
SchmidtDecomposition schmidt_decompose(const PureState& phi, const Bipartition& cut);

/// Haar-random state: complex normal vector, normalized. Deterministic per seed.
PureState random_pure_state(int num_qubits, std::uint64_t seed);
/// Independent Haar states on each side of the cut, assembled in qubit order.
PureState random_product_state(const Bipartition& cut, std::uint64_t seed);
/// Independent single-qubit Haar states, one per qubit.
PureState random_local_product_state(int num_qubits, std::uint64_t seed);
/// Induced measure: partial trace of a Haar purification with `rank` ancilla levels.
DensityOperator random_density_operator(int num_qubits, int rank, std::uint64_t seed);
/// Haar unitary from the QR decomposition of a complex Ginibre matrix.
Matrix random_unitary(std::size_t dim, std::uint64_t seed);

/// Output qubit j carries input qubit order[j].
PureState permute_qubits(const PureState& phi, std::span<const int> order);
DensityOperator permute_qubits(const DensityOperator& rho, std::span<const int> order);

/// Transpose of the tensor factors in `transposed`.
Matrix partial_transpose(const Matrix& rho, int num_qubits, std::span<const int> transposed);

/// If purity is within `tolerance` of one, the dominant eigenvector.
std::optional<PureState> as_pure(const DensityOperator& rho, double tolerance = 1e-9);

enum class SeparabilityMethod { Schmidt, PartialTranspose };

struct SeparabilityVerdict {
  bool separable;
  /// Pure: 1 - largest Schmidt coefficient. Mixed: negativity (magnitude of
  /// the most negative partial-transpose eigenvalue, 0 when PPT).
  double margin;
  SeparabilityMethod method;
};

/// Ground-truth separability across `cut`. Exact for pure states of any size
/// and for mixed 2x2 cuts; other mixed cases raise UnsupportedOracle.
SeparabilityVerdict is_separable_oracle(const DensityOperator& rho, const Bipartition& cut);
SeparabilityVerdict is_separable_oracle(const PureState& phi, const Bipartition& cut);

struct WeightedState {
  double coefficient;
  DensityOperator state;
};

/// Splits a Hermitian W into c+ rho+ + c- rho- using its spectrum; each part
/// is normalized to unit trace and dropped when empty.
std::vector<WeightedState> decompose_hermitian(const Matrix& w);
Matrix recompose(std::span<const WeightedState> terms);

/// Euclidean distance after padding the shorter state with |0> qubits
/// appended after its last qubit.
double padded_distance(const PureState& a, const PureState& b);

namespace detail {
/// Global index of the local index `local` over `qubits` (first qubit = MSB).
std::size_t scatter_index(std::size_t local, std::span<const int> qubits, int num_qubits) noexcept;
std::vector<std::size_t> scatter_table(std::span<const int> qubits, int num_qubits);
std::vector<int> complement(std::span<const int> qubits, int num_qubits);
void check_qubit_list(std::span<const int> qubits, int num_qubits, bool require_sorted);
}  // namespace detail

}  // namespace qlang
