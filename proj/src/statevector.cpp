// SPDX-License-Identifier: MIT

#include "qpredict/statevector.hpp"

#include "qpredict/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#ifdef QPREDICT_HAVE_OPENMP
#include <omp.h>
#endif

namespace qpredict {

namespace {

using namespace std::complex_literals;
constexpr double kPi = std::numbers::pi;

GateMatrix one(std::initializer_list<Amplitude> v) {
  return GateMatrix{1, std::vector<Amplitude>(v)};
}

GateMatrix u3_matrix(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  return one({c, -std::exp(1i * lambda) * s, std::exp(1i * phi) * s,
              std::exp(1i * (phi + lambda)) * c});
}

GateMatrix diag1(Amplitude a, Amplitude b) { return one({a, 0.0, 0.0, b}); }

// block_diag(I, u): the control is the most significant local bit.
GateMatrix controlled(const GateMatrix& u) {
  GateMatrix m;
  m.num_qubits = u.num_qubits + 1;
  const std::size_t d = m.dim();
  const std::size_t h = u.dim();
  m.data.assign(d * d, 0.0);
  for (std::size_t i = 0; i < h; ++i) {
    m.data[i * d + i] = 1.0;
  }
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < h; ++c) {
      m.data[(h + r) * d + (h + c)] = u(r, c);
    }
  }
  return m;
}

GateMatrix swap_matrix() {
  GateMatrix m{2, std::vector<Amplitude>(16, 0.0)};
  m.data[0] = m.data[1 * 4 + 2] = m.data[2 * 4 + 1] = m.data[15] = 1.0;
  return m;
}

GateMatrix scale(GateMatrix m, Amplitude f) {
  for (auto& v : m.data) {
    v *= f;
  }
  return m;
}

void apply_block(StateVector& state, const GateMatrix& m,
                 std::span<const std::size_t> offsets, std::size_t base,
                 Amplitude* scratch) {
  const std::size_t d = m.dim();
  for (std::size_t r = 0; r < d; ++r) {
    Amplitude acc = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      acc += m.data[r * d + c] * state[base + offsets[c]];
    }
    scratch[r] = acc;
  }
  for (std::size_t r = 0; r < d; ++r) {
    state[base + offsets[r]] = scratch[r];
  }
}

struct Plan {
  std::vector<std::size_t> offsets;  // local index -> amplitude offset
  std::vector<Qubit> sorted;         // gate qubits ascending
  std::size_t blocks = 0;
};

Plan make_plan(std::size_t state_size, const GateMatrix& m,
               std::span<const Qubit> qubits) {
  const int k = m.num_qubits;
  if (static_cast<int>(qubits.size()) != k) {
    throw InvalidCircuitError("matrix arity does not match qubit list");
  }
  Plan plan;
  plan.offsets.resize(m.dim());
  for (std::size_t local = 0; local < m.dim(); ++local) {
    std::size_t off = 0;
    for (int t = 0; t < k; ++t) {
      if ((local >> (k - 1 - t)) & 1U) {
        off |= std::size_t{1} << qubits[t];
      }
    }
    plan.offsets[local] = off;
  }
  plan.sorted.assign(qubits.begin(), qubits.end());
  std::sort(plan.sorted.begin(), plan.sorted.end());
  plan.blocks = state_size >> k;
  return plan;
}

// Inserts a zero bit at every gate-qubit position of the block counter.
std::size_t block_base(std::size_t j, std::span<const Qubit> sorted) {
  for (Qubit q : sorted) {
    const std::size_t low = j & ((std::size_t{1} << q) - 1);
    j = ((j >> q) << (q + 1)) | low;
  }
  return j;
}

}  // namespace

GateMatrix gate_matrix(GateKind kind, std::span<const double> params) {
  const double s2 = 1.0 / std::sqrt(2.0);
  auto p = [&](std::size_t i) { return params[i]; };
  if (params.size() != static_cast<std::size_t>(gate_info(kind).num_params)) {
    throw InvalidCircuitError("wrong parameter count for " +
                              std::string(gate_name(kind)));
  }
  switch (kind) {
    case GateKind::Id: return diag1(1.0, 1.0);
    case GateKind::X: return one({0.0, 1.0, 1.0, 0.0});
    case GateKind::Y: return one({0.0, -1i, 1i, 0.0});
    case GateKind::Z: return diag1(1.0, -1.0);
    case GateKind::H: return one({s2, s2, s2, -s2});
    case GateKind::S: return diag1(1.0, 1i);
    case GateKind::Sdg: return diag1(1.0, -1i);
    case GateKind::T: return diag1(1.0, std::exp(1i * (kPi / 4)));
    case GateKind::Tdg: return diag1(1.0, std::exp(-1i * (kPi / 4)));
    case GateKind::SX:
      return one({0.5 + 0.5i, 0.5 - 0.5i, 0.5 - 0.5i, 0.5 + 0.5i});
    case GateKind::SXdg:
      return one({0.5 - 0.5i, 0.5 + 0.5i, 0.5 + 0.5i, 0.5 - 0.5i});
    case GateKind::RX: {
      const double c = std::cos(p(0) / 2), s = std::sin(p(0) / 2);
      return one({c, -1i * s, -1i * s, c});
    }
    case GateKind::RY: {
      const double c = std::cos(p(0) / 2), s = std::sin(p(0) / 2);
      return one({c, -s, s, c});
    }
    case GateKind::RZ:
      return diag1(std::exp(-1i * (p(0) / 2)), std::exp(1i * (p(0) / 2)));
    case GateKind::P:
    case GateKind::U1: return diag1(1.0, std::exp(1i * p(0)));
    case GateKind::U2: return u3_matrix(kPi / 2, p(0), p(1));
    case GateKind::U3:
    case GateKind::U: return u3_matrix(p(0), p(1), p(2));
    case GateKind::CX: return controlled(gate_matrix(GateKind::X, {}));
    case GateKind::CY: return controlled(gate_matrix(GateKind::Y, {}));
    case GateKind::CZ: return controlled(gate_matrix(GateKind::Z, {}));
    case GateKind::CH: return controlled(gate_matrix(GateKind::H, {}));
    case GateKind::Swap: return swap_matrix();
    case GateKind::CRX: return controlled(gate_matrix(GateKind::RX, params));
    case GateKind::CRY: return controlled(gate_matrix(GateKind::RY, params));
    case GateKind::CRZ: return controlled(gate_matrix(GateKind::RZ, params));
    case GateKind::CP:
    case GateKind::CU1: return controlled(gate_matrix(GateKind::P, params));
    case GateKind::CU3: return controlled(u3_matrix(p(0), p(1), p(2)));
    case GateKind::CSX: return controlled(gate_matrix(GateKind::SX, {}));
    case GateKind::CU:
      return controlled(scale(u3_matrix(p(0), p(1), p(2)), std::exp(1i * p(3))));
    case GateKind::RXX: {
      const double c = std::cos(p(0) / 2), s = std::sin(p(0) / 2);
      GateMatrix m{2, std::vector<Amplitude>(16, 0.0)};
      for (int i = 0; i < 4; ++i) {
        m.data[i * 4 + i] = c;
        m.data[i * 4 + (3 - i)] = -1i * s;
      }
      return m;
    }
    case GateKind::RZZ: {
      GateMatrix m{2, std::vector<Amplitude>(16, 0.0)};
      const Amplitude a = std::exp(-1i * (p(0) / 2));
      const Amplitude b = std::exp(1i * (p(0) / 2));
      m.data[0] = a;
      m.data[5] = b;
      m.data[10] = b;
      m.data[15] = a;
      return m;
    }
    case GateKind::CCX: return controlled(gate_matrix(GateKind::CX, {}));
    case GateKind::CSwap: return controlled(swap_matrix());
    case GateKind::Measure:
    case GateKind::Barrier: break;
  }
  throw UnsupportedError("no unitary for " + std::string(gate_name(kind)));
}

GateMatrix gate_matrix(const Instruction& inst) {
  return gate_matrix(inst.kind, inst.params);
}

GateMatrix multiply(const GateMatrix& a, const GateMatrix& b) {
  if (a.num_qubits != b.num_qubits) {
    throw InvalidCircuitError("matrix size mismatch");
  }
  const std::size_t d = a.dim();
  GateMatrix out{a.num_qubits, std::vector<Amplitude>(d * d, 0.0)};
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t c = 0; c < d; ++c) {
        out.data[r * d + c] += a.data[r * d + k] * b.data[k * d + c];
      }
    }
  }
  return out;
}

bool equal_up_to_phase(const GateMatrix& a, const GateMatrix& b, double tol) {
  if (a.num_qubits != b.num_qubits) {
    return false;
  }
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < b.data.size(); ++i) {
    if (std::abs(b.data[i]) > std::abs(b.data[pivot])) {
      pivot = i;
    }
  }
  if (std::abs(b.data[pivot]) < tol || std::abs(a.data[pivot]) < tol) {
    return false;
  }
  const Amplitude phase = a.data[pivot] / b.data[pivot];
  if (std::abs(std::abs(phase) - 1.0) > tol) {
    return false;
  }
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    if (std::abs(a.data[i] - phase * b.data[i]) > tol) {
      return false;
    }
  }
  return true;
}

void apply_matrix(StateVector& state, const GateMatrix& m,
                  std::span<const Qubit> qubits) {
  const Plan plan = make_plan(state.size(), m, qubits);
  const auto blocks = static_cast<long long>(plan.blocks);
#ifdef QPREDICT_HAVE_OPENMP
#pragma omp parallel if (blocks >= 4096)
#endif
  {
    std::vector<Amplitude> scratch(m.dim());
#ifdef QPREDICT_HAVE_OPENMP
#pragma omp for schedule(static)
#endif
    for (long long j = 0; j < blocks; ++j) {
      apply_block(state, m, plan.offsets,
                  block_base(static_cast<std::size_t>(j), plan.sorted),
                  scratch.data());
    }
  }
}

void apply_matrix_ref(StateVector& state, const GateMatrix& m,
                      std::span<const Qubit> qubits) {
  const Plan plan = make_plan(state.size(), m, qubits);
  std::vector<Amplitude> scratch(m.dim());
  for (std::size_t j = 0; j < plan.blocks; ++j) {
    apply_block(state, m, plan.offsets, block_base(j, plan.sorted),
                scratch.data());
  }
}

namespace {

// The compacted side of an equivalence check may pick up routing-only
// qubits beyond the public limit.
constexpr int kMaxCompactedQubits = 20;

StateVector simulate_capped(const Circuit& c, int cap) {
  if (c.num_qubits() > cap) {
    throw Error("statevector simulation limited to " + std::to_string(cap) +
                " qubits, circuit has " + std::to_string(c.num_qubits()));
  }
  StateVector state(std::size_t{1} << c.num_qubits(), 0.0);
  state[0] = 1.0;
  for (const auto& op : c.ops()) {
    if (!op.is_gate()) {
      throw UnsupportedError("cannot simulate " + std::string(gate_name(op.kind)) +
                             "; strip directives first");
    }
    apply_matrix(state, gate_matrix(op), op.qubits);
  }
  return state;
}

}  // namespace

StateVector simulate_statevector(const Circuit& c) {
  return simulate_capped(c, kMaxSimulatedQubits);
}

bool check_equivalence(const Circuit& original, const Circuit& compiled,
                       std::span<const Qubit> layout, double tol) {
  if (static_cast<int>(layout.size()) != original.num_qubits()) {
    throw Error("layout size " + std::to_string(layout.size()) +
                " does not match circuit width " +
                std::to_string(original.num_qubits()));
  }
  std::vector<bool> image(static_cast<std::size_t>(compiled.num_qubits()), false);
  for (Qubit p : layout) {
    if (p < 0 || p >= compiled.num_qubits() || image[p]) {
      throw Error("layout is not injective into the compiled circuit's qubits");
    }
    image[p] = true;
  }

  // Measurements: the last measure of each classical bit must read the
  // relabeled qubit.
  auto last_measures = [](const Circuit& c) {
    std::map<Clbit, Qubit> m;
    for (const auto& op : c.ops()) {
      if (op.kind == GateKind::Measure) {
        m[*op.clbit] = op.qubits[0];
      }
    }
    return m;
  };
  auto expected = last_measures(original);
  for (auto& [clbit, q] : expected) {
    q = layout[q];
  }
  if (expected != last_measures(compiled)) {
    return false;
  }

  // Compact the compiled circuit onto the physical qubits it touches.
  std::vector<Qubit> active;
  std::vector<bool> touched = image;
  for (const auto& op : compiled.ops()) {
    if (op.is_gate()) {
      for (Qubit q : op.qubits) {
        touched[q] = true;
      }
    }
  }
  std::vector<Qubit> compact(touched.size(), -1);
  for (std::size_t p = 0; p < touched.size(); ++p) {
    if (touched[p]) {
      compact[p] = static_cast<Qubit>(active.size());
      active.push_back(static_cast<Qubit>(p));
    }
  }
  Circuit reduced(static_cast<int>(active.size()));
  for (const auto& op : compiled.ops()) {
    if (!op.is_gate()) {
      continue;
    }
    Instruction mapped = op;
    for (Qubit& q : mapped.qubits) {
      q = compact[q];
    }
    reduced.append(std::move(mapped));
  }

  const StateVector a = simulate_statevector(original.without_directives());
  const StateVector b = simulate_capped(reduced, kMaxCompactedQubits);

  std::vector<std::size_t> target(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t j = 0;
    for (int q = 0; q < original.num_qubits(); ++q) {
      if ((i >> q) & 1U) {
        j |= std::size_t{1} << compact[layout[q]];
      }
    }
    target[i] = j;
  }
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i]) > std::abs(a[pivot])) {
      pivot = i;
    }
  }
  if (std::abs(b[target[pivot]]) < tol) {
    return false;
  }
  const Amplitude phase = b[target[pivot]] / a[pivot];
  std::vector<bool> covered(b.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    covered[target[i]] = true;
    if (std::abs(b[target[i]] - phase * a[i]) > tol) {
      return false;
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!covered[j] && std::abs(b[j]) > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace qpredict
