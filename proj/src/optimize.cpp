// SPDX-License-Identifier: MIT

#include "qpredict/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qpredict {

namespace {

constexpr double kAngleEps = 1e-12;

bool self_inverse(GateKind k) {
  switch (k) {
    case GateKind::X: case GateKind::Y: case GateKind::Z: case GateKind::H:
    case GateKind::CX: case GateKind::CY: case GateKind::CZ: case GateKind::Swap:
    case GateKind::CCX: case GateKind::CSwap:
      return true;
    default:
      return false;
  }
}

bool inverse_pair(GateKind a, GateKind b) {
  auto is = [&](GateKind x, GateKind y) {
    return (a == x && b == y) || (a == y && b == x);
  };
  return is(GateKind::S, GateKind::Sdg) || is(GateKind::T, GateKind::Tdg) ||
         is(GateKind::SX, GateKind::SXdg);
}

bool fusible(GateKind k) {
  switch (k) {
    case GateKind::RX: case GateKind::RY: case GateKind::RZ: case GateKind::P:
    case GateKind::U1: case GateKind::RXX: case GateKind::RZZ:
      return true;
    default:
      return false;
  }
}

bool single_angle_rotation(GateKind k) {
  switch (k) {
    case GateKind::RX: case GateKind::RY: case GateKind::RZ: case GateKind::P:
    case GateKind::U1: case GateKind::RXX: case GateKind::RZZ: case GateKind::CRX:
    case GateKind::CRY: case GateKind::CRZ: case GateKind::CP: case GateKind::CU1:
      return true;
    default:
      return false;
  }
}

bool symmetric(GateKind k) {
  return k == GateKind::CZ || k == GateKind::Swap || k == GateKind::RXX ||
         k == GateKind::RZZ || k == GateKind::CP || k == GateKind::CU1;
}

bool same_operands(const Instruction& a, const Instruction& b) {
  if (a.qubits == b.qubits) {
    return true;
  }
  return symmetric(a.kind) && a.kind == b.kind && a.qubits.size() == 2 &&
         a.qubits[0] == b.qubits[1] && a.qubits[1] == b.qubits[0];
}

// Wraps into (-pi, pi]; for the fusible kinds this changes at most the
// global phase.
double wrap_angle(double t) {
  constexpr double two_pi = 2 * std::numbers::pi;
  t = std::fmod(t, two_pi);
  if (t <= -std::numbers::pi) t += two_pi;
  if (t > std::numbers::pi) t -= two_pi;
  return t;
}

// Pauli axis a gate is a function of on one of its qubits. Two gates
// commute when, on every shared qubit, they are functions of the same
// axis.
enum class Axis { Z, X, Other };

Axis axis_on(const Instruction& op, std::size_t slot) {
  switch (op.kind) {
    case GateKind::Id: case GateKind::Z: case GateKind::S: case GateKind::Sdg:
    case GateKind::T: case GateKind::Tdg: case GateKind::RZ: case GateKind::P:
    case GateKind::U1: case GateKind::CZ: case GateKind::RZZ: case GateKind::CP:
    case GateKind::CU1: case GateKind::CRZ:
      return Axis::Z;
    case GateKind::X: case GateKind::SX: case GateKind::SXdg: case GateKind::RX:
    case GateKind::RXX:
      return Axis::X;
    case GateKind::CX: case GateKind::CSX: case GateKind::CRX:
      return slot == 0 ? Axis::Z : Axis::X;
    case GateKind::CY: case GateKind::CH: case GateKind::CRY: case GateKind::CU3:
    case GateKind::CU:
      return slot == 0 ? Axis::Z : Axis::Other;
    default:
      return Axis::Other;
  }
}

bool commutes(const Instruction& a, const Instruction& b) {
  for (std::size_t i = 0; i < a.qubits.size(); ++i) {
    for (std::size_t j = 0; j < b.qubits.size(); ++j) {
      if (a.qubits[i] == b.qubits[j]) {
        const Axis x = axis_on(a, i);
        if (x == Axis::Other || x != axis_on(b, j)) {
          return false;
        }
      }
    }
  }
  return true;
}

struct Rules {
  bool fuse = false;
  bool commute = false;
  bool swap_reuse = false;
};

class Rewriter {
 public:
  Rewriter(std::vector<Instruction> ops, int num_qubits)
      : ops_(std::move(ops)), num_qubits_(num_qubits) {}

  std::vector<Instruction> run(const Rules& rules) {
    for (int iter = 0; iter < 1000; ++iter) {
      bool changed = drop_identities(rules.fuse);
      reindex();
      if (rules.swap_reuse) {
        changed |= orient_swaps();
      }
      changed |= merge_pass(rules);
      compact();
      if (!changed) {
        break;
      }
    }
    return std::move(ops_);
  }

 private:
  void compact() {
    std::vector<Instruction> kept;
    kept.reserve(ops_.size());
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (!removed_[i]) kept.push_back(std::move(ops_[i]));
    }
    ops_ = std::move(kept);
    removed_.assign(ops_.size(), false);
  }

  void reindex() {
    removed_.resize(ops_.size(), false);
    wires_.assign(static_cast<std::size_t>(num_qubits_), {});
    slot_pos_.assign(ops_.size(), {});
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      for (Qubit q : ops_[i].qubits) {
        slot_pos_[i].push_back(wires_[q].size());
        wires_[q].push_back(i);
      }
    }
  }

  bool drop_identities(bool wrap) {
    removed_.assign(ops_.size(), false);
    bool changed = false;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      auto& op = ops_[i];
      if (op.kind == GateKind::Id) {
        removed_[i] = changed = true;
      } else if (single_angle_rotation(op.kind)) {
        const double t = wrap && fusible(op.kind) ? wrap_angle(op.params[0]) : op.params[0];
        if (std::abs(t) < kAngleEps) {
          removed_[i] = changed = true;
        }
      }
    }
    compact();
    return changed;
  }

  // Next live op after `i` on the wire of its `slot`-th qubit, or npos.
  std::size_t next_on(std::size_t i, std::size_t slot) const {
    const auto& wire = wires_[ops_[i].qubits[slot]];
    for (std::size_t p = slot_pos_[i][slot] + 1; p < wire.size(); ++p) {
      if (!removed_[wire[p]]) return wire[p];
    }
    return npos;
  }

  std::size_t prev_on(std::size_t i, std::size_t slot) const {
    const auto& wire = wires_[ops_[i].qubits[slot]];
    for (std::size_t p = slot_pos_[i][slot]; p-- > 0;) {
      if (!removed_[wire[p]]) return wire[p];
    }
    return npos;
  }

  bool partner(const Instruction& g, const Instruction& h, const Rules& rules) const {
    if (g.qubits.size() != h.qubits.size() || !same_operands(g, h)) {
      return false;
    }
    if (g.kind == h.kind && self_inverse(g.kind)) {
      return true;
    }
    if (!rules.fuse) {
      return false;
    }
    return inverse_pair(g.kind, h.kind) || (g.kind == h.kind && fusible(g.kind));
  }

  bool merge_pass(const Rules& rules) {
    bool changed = false;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (removed_[i] || !ops_[i].is_gate()) continue;
      const Instruction& g = ops_[i];
      std::size_t match = npos;
      bool ok = true;
      for (std::size_t slot = 0; slot < g.qubits.size() && ok; ++slot) {
        std::size_t k = next_on(i, slot);
        std::size_t found = npos;
        while (k != npos) {
          const Instruction& h = ops_[k];
          if (h.is_gate() && partner(g, h, rules)) {
            found = k;
            break;
          }
          if (!rules.commute || !h.is_gate() || !commutes(g, h)) break;
          const std::size_t hs = slot_of(k, g.qubits[slot]);
          k = next_on(k, hs);
        }
        if (found == npos || (match != npos && found != match)) {
          ok = false;
        }
        match = found;
      }
      if (!ok || match == npos) continue;
      Instruction& h = ops_[match];
      if (h.kind == g.kind && fusible(g.kind)) {
        const double t = wrap_angle(g.params[0] + h.params[0]);
        removed_[i] = true;
        if (std::abs(t) < kAngleEps) {
          removed_[match] = true;
        } else {
          h.params[0] = t;
        }
      } else {
        removed_[i] = true;
        removed_[match] = true;
      }
      changed = true;
    }
    return changed;
  }

  std::size_t slot_of(std::size_t op, Qubit q) const {
    const auto& qs = ops_[op].qubits;
    return static_cast<std::size_t>(std::find(qs.begin(), qs.end(), q) - qs.begin());
  }

  // Both wires of a two-qubit op lead to the same neighbouring op.
  std::size_t joint_next(std::size_t i) const {
    const std::size_t a = next_on(i, 0);
    return a != npos && a == next_on(i, 1) ? a : npos;
  }
  std::size_t joint_prev(std::size_t i) const {
    const std::size_t a = prev_on(i, 0);
    return a != npos && a == prev_on(i, 1) ? a : npos;
  }

  static bool is_cx(const Instruction& op, Qubit c, Qubit t) {
    return op.kind == GateKind::CX && op.qubits[0] == c && op.qubits[1] == t;
  }

  // A routed SWAP lowers to cx(a,b) cx(b,a) cx(a,b). When a neighbouring
  // cx(b,a) sits next to the triple, reorient it to cx(b,a) cx(a,b)
  // cx(b,a) so the outer CX cancels against the neighbour.
  bool orient_swaps() {
    bool changed = false;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (removed_[i] || ops_[i].kind != GateKind::CX) continue;
      const Qubit a = ops_[i].qubits[0];
      const Qubit b = ops_[i].qubits[1];
      const std::size_t j = joint_next(i);
      if (j == npos || !is_cx(ops_[j], b, a)) continue;
      const std::size_t k = joint_next(j);
      if (k == npos || !is_cx(ops_[k], a, b)) continue;
      const std::size_t before = joint_prev(i);
      const std::size_t after = joint_next(k);
      const bool reuse = (before != npos && is_cx(ops_[before], b, a)) ||
                         (after != npos && is_cx(ops_[after], b, a));
      if (!reuse) continue;
      ops_[i].qubits = {b, a};
      ops_[j].qubits = {a, b};
      ops_[k].qubits = {b, a};
      reindex();
      changed = true;
    }
    return changed;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<Instruction> ops_;
  int num_qubits_;
  std::vector<bool> removed_;
  std::vector<std::vector<std::size_t>> wires_;
  std::vector<std::vector<std::size_t>> slot_pos_;
};

Circuit apply_rules(const Circuit& c, const Rules& rules) {
  Rewriter rw(c.ops(), c.num_qubits());
  return c.with_ops(rw.run(rules));
}

}  // namespace

Circuit optimize(const Circuit& c, OptLevel level) {
  if (level == OptLevel::O0) {
    return c;
  }
  Circuit out = apply_rules(c, Rules{});
  if (level >= OptLevel::O2) {
    out = apply_rules(out, Rules{.fuse = true});
  }
  if (level >= OptLevel::O3) {
    out = apply_rules(out, Rules{.fuse = true, .commute = true, .swap_reuse = true});
  }
  return out;
}

}  // namespace qpredict
