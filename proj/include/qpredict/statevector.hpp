// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/circuit.hpp"

#include <complex>
#include <span>
#include <vector>

namespace qpredict {

using Amplitude = std::complex<double>;
using StateVector = std::vector<Amplitude>;

inline constexpr int kMaxSimulatedQubits = 12;

/// Dense unitary of a gate, row-major. The first listed qubit of the gate
/// is the most significant bit of the local index.
struct GateMatrix {
  int num_qubits = 0;
  std::vector<Amplitude> data;

  std::size_t dim() const { return std::size_t{1} << num_qubits; }
  Amplitude operator()(std::size_t r, std::size_t c) const {
    return data[r * dim() + c];
  }
};

GateMatrix gate_matrix(GateKind kind, std::span<const double> params);
GateMatrix gate_matrix(const Instruction& inst);

GateMatrix multiply(const GateMatrix& a, const GateMatrix& b);

/// True if `a == e^{i phi} b` for some phase, elementwise within `tol`.
bool equal_up_to_phase(const GateMatrix& a, const GateMatrix& b,
                       double tol = 1e-9);

/// Applies `m` to `state` on `qubits`. Qubit q is bit q of the amplitude
/// index. The parallel kernel splits the outer loop over amplitude blocks.
void apply_matrix(StateVector& state, const GateMatrix& m,
                  std::span<const Qubit> qubits);

/// Serial reference for `apply_matrix`; bit-identical results.
void apply_matrix_ref(StateVector& state, const GateMatrix& m,
                      std::span<const Qubit> qubits);

/// Final state from |0...0>. Rejects measure/barrier and circuits wider
/// than kMaxSimulatedQubits.
StateVector simulate_statevector(const Circuit& c);

/// Whether `compiled` prepares the same state as `original` up to global
/// phase once logical qubit i is relabeled to physical qubit layout[i].
/// Physical qubits outside the layout image must end in |0>. Measurements
/// must target the same classical bits through the layout.
bool check_equivalence(const Circuit& original, const Circuit& compiled,
                       std::span<const Qubit> layout, double tol = 1e-8);

}  // namespace qpredict
