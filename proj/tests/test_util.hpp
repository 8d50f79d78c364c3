// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/circuit.hpp"
#include "qpredict/rng.hpp"
#include "qpredict/statevector.hpp"

#include <algorithm>
#include <numbers>
#include <vector>

namespace qpredict::testing {

inline Circuit ghz3(bool measured = true) {
  Circuit c(3, 3, "ghz3");
  c.gate(GateKind::H, {0}).gate(GateKind::CX, {0, 1}).gate(GateKind::CX, {1, 2});
  if (measured) c.measure_all();
  return c;
}

inline std::vector<Qubit> distinct_qubits(CounterRng& rng, int n, int k) {
  std::vector<Qubit> qs;
  while (static_cast<int>(qs.size()) < k) {
    const auto q = static_cast<Qubit>(rng.below(static_cast<std::uint64_t>(n)));
    if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
  }
  return qs;
}

inline Instruction random_gate(CounterRng& rng, int n) {
  const auto kinds = unitary_gate_kinds();
  while (true) {
    const GateKind k = kinds[rng.below(kinds.size())];
    const int arity = gate_info(k).num_qubits;
    if (arity > n) continue;
    std::vector<double> params;
    for (int i = 0; i < gate_info(k).num_params; ++i) {
      params.push_back((2 * rng.uniform() - 1) * std::numbers::pi);
    }
    return make_gate(k, distinct_qubits(rng, n, arity), params);
  }
}

/// Random circuit over every gate kind; optionally sprinkles barriers and
/// ends with measurements.
inline Circuit random_circuit(CounterRng& rng, int n, int gates, bool directives = false) {
  Circuit c(n, directives ? n : 0, "random");
  for (int i = 0; i < gates; ++i) {
    if (directives && rng.below(10) == 0) {
      c.barrier(distinct_qubits(rng, n, 1 + static_cast<int>(rng.below(n))));
      continue;
    }
    c.append(random_gate(rng, n));
  }
  if (directives) c.measure_all();
  return c;
}

/// Full unitary of a directive-free circuit, one simulated column per basis
/// state. Row/column index bit q is qubit q.
inline GateMatrix circuit_unitary(const Circuit& c) {
  const int n = c.num_qubits();
  GateMatrix u;
  u.num_qubits = n;
  const std::size_t dim = std::size_t{1} << n;
  u.data.assign(dim * dim, 0.0);
  for (std::size_t col = 0; col < dim; ++col) {
    StateVector s(dim, 0.0);
    s[col] = 1.0;
    for (const auto& op : c.ops()) apply_matrix_ref(s, gate_matrix(op), op.qubits);
    for (std::size_t row = 0; row < dim; ++row) u.data[row * dim + col] = s[row];
  }
  return u;
}

/// Gate sequence implementing the inverse of `g`.
inline std::vector<Instruction> inverse_of(const Instruction& g) {
  const auto& q = g.qubits;
  const auto& p = g.params;
  auto one = [&](GateKind k, std::vector<double> ps = {}) {
    return std::vector<Instruction>{make_gate(k, q, std::move(ps))};
  };
  switch (g.kind) {
    case GateKind::S: return one(GateKind::Sdg);
    case GateKind::Sdg: return one(GateKind::S);
    case GateKind::T: return one(GateKind::Tdg);
    case GateKind::Tdg: return one(GateKind::T);
    case GateKind::SX: return one(GateKind::SXdg);
    case GateKind::SXdg: return one(GateKind::SX);
    case GateKind::RX: case GateKind::RY: case GateKind::RZ: case GateKind::P:
    case GateKind::U1: case GateKind::CRX: case GateKind::CRY: case GateKind::CRZ:
    case GateKind::CP: case GateKind::CU1: case GateKind::RXX: case GateKind::RZZ:
      return one(g.kind, {-p[0]});
    case GateKind::U2:
      return one(GateKind::U3, {-std::numbers::pi / 2, -p[1], -p[0]});
    case GateKind::U3: case GateKind::U: case GateKind::CU3:
      return one(g.kind, {-p[0], -p[2], -p[1]});
    case GateKind::CU:
      return one(GateKind::CU, {-p[0], -p[2], -p[1], -p[3]});
    case GateKind::CSX: {
      // csx^-1 = h . cu1(-pi/2) . h on the target
      return {make_gate(GateKind::H, {q[1]}), make_gate(GateKind::CU1, q, {-std::numbers::pi / 2}),
              make_gate(GateKind::H, {q[1]})};
    }
    default:
      return one(g.kind, p);  // self-inverse
  }
}

}  // namespace qpredict::testing
