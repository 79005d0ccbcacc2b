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

// Instance generators shared by the unit tests and the acceptance binary.

#include <cstdint>
#include <numbers>

#include "qlang/circuit.hpp"
#include "qlang/qstate.hpp"
#include "qlang/rng.hpp"

namespace fixture {

inline qlang::PureState bell() {
  qlang::Vector v = qlang::Vector::Zero(4);
  v(0) = v(3) = std::numbers::sqrt2 / 2.0;
  return qlang::PureState(v);
}

inline qlang::Matrix cnot() {
  qlang::Matrix m = qlang::Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

/// Random circuit on up to 3 qubits from H, local and two-qubit unitaries, CNOT.
inline qlang::Circuit random_circuit(int n, std::uint64_t seed) {
  using qlang::Gate;
  qlang::CounterRng rng(seed, 3);
  qlang::Circuit c(n);
  const int depth = 1 + static_cast<int>(rng.next_u64() % 5);
  for (int k = 0; k < depth; ++k) {
    const int q = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
    const int r = n > 1 ? (q + 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n - 1))) % n : q;
    switch (rng.next_u64() % 4) {
      case 0: c.add(Gate::hadamard(q)); break;
      case 1: c.add(Gate::unitary(qlang::random_unitary(2, seed * 31 + static_cast<std::uint64_t>(k)), {q})); break;
      case 2:
        if (n > 1) c.add(Gate::unitary(cnot(), {q, r}));
        break;
      default:
        if (n > 1) c.add(Gate::unitary(qlang::random_unitary(4, seed * 57 + static_cast<std::uint64_t>(k)), {q, r}));
        break;
    }
  }
  return c;
}

/// Unit vector orthogonal to phi.
inline qlang::PureState orthogonal_to(const qlang::PureState& phi, std::uint64_t seed) {
  const auto x = qlang::random_pure_state(phi.num_qubits(), seed);
  return qlang::PureState::normalized(x.amplitudes() - qlang::inner_product(phi, x) * phi.amplitudes());
}

}  // namespace fixture
