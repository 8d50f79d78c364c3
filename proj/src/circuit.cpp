// SPDX-License-Identifier: MIT

#include "qpredict/circuit.hpp"

#include "qpredict/errors.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace qpredict {

namespace {

constexpr std::array<GateInfo, kNumGateKinds> kGateTable{{
    {"id", 1, 0},     {"x", 1, 0},      {"y", 1, 0},     {"z", 1, 0},
    {"h", 1, 0},      {"s", 1, 0},      {"sdg", 1, 0},   {"t", 1, 0},
    {"tdg", 1, 0},    {"sx", 1, 0},     {"sxdg", 1, 0},  {"rx", 1, 1},
    {"ry", 1, 1},     {"rz", 1, 1},     {"p", 1, 1},     {"u1", 1, 1},
    {"u2", 1, 2},     {"u3", 1, 3},     {"u", 1, 3},     {"cx", 2, 0},
    {"cy", 2, 0},     {"cz", 2, 0},     {"ch", 2, 0},    {"swap", 2, 0},
    {"crx", 2, 1},    {"cry", 2, 1},    {"crz", 2, 1},   {"cp", 2, 1},
    {"cu1", 2, 1},    {"cu3", 2, 3},    {"csx", 2, 0},   {"cu", 2, 4},
    {"rxx", 2, 1},    {"rzz", 2, 1},    {"ccx", 3, 0},   {"cswap", 3, 0},
    {"measure", 1, 0}, {"barrier", -1, 0},
}};

constexpr auto kUnitaryKinds = [] {
  std::array<GateKind, kNumGateKinds - 2> kinds{};
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    kinds[i] = static_cast<GateKind>(i);
  }
  return kinds;
}();

}  // namespace

const GateInfo& gate_info(GateKind kind) {
  return kGateTable[static_cast<std::size_t>(kind)];
}

std::string_view gate_name(GateKind kind) { return gate_info(kind).name; }

std::optional<GateKind> gate_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kGateTable.size(); ++i) {
    if (kGateTable[i].name == name) {
      return static_cast<GateKind>(i);
    }
  }
  return std::nullopt;
}

std::span<const GateKind> unitary_gate_kinds() { return kUnitaryKinds; }

Instruction make_gate(GateKind kind, std::vector<Qubit> qubits,
                      std::vector<double> params) {
  return Instruction{kind, std::move(qubits), std::move(params), std::nullopt};
}

Instruction make_measure(Qubit qubit, Clbit clbit) {
  return Instruction{GateKind::Measure, {qubit}, {}, clbit};
}

Instruction make_barrier(std::vector<Qubit> qubits) {
  return Instruction{GateKind::Barrier, std::move(qubits), {}, std::nullopt};
}

void validate_instruction(const Instruction& inst, int num_qubits,
                          int num_clbits) {
  const GateInfo& info = gate_info(inst.kind);
  const std::string name(info.name);
  if (info.num_qubits >= 0 &&
      inst.qubits.size() != static_cast<std::size_t>(info.num_qubits)) {
    throw InvalidCircuitError(name + " expects " +
                              std::to_string(info.num_qubits) + " qubit(s), got " +
                              std::to_string(inst.qubits.size()));
  }
  if (inst.kind == GateKind::Barrier && inst.qubits.empty()) {
    throw InvalidCircuitError("barrier without qubits");
  }
  if (inst.params.size() != static_cast<std::size_t>(info.num_params)) {
    throw InvalidCircuitError(name + " expects " +
                              std::to_string(info.num_params) +
                              " parameter(s), got " +
                              std::to_string(inst.params.size()));
  }
  std::set<Qubit> seen;
  for (Qubit q : inst.qubits) {
    if (q < 0 || q >= num_qubits) {
      throw InvalidCircuitError(name + ": qubit index " + std::to_string(q) +
                                " out of range [0, " +
                                std::to_string(num_qubits) + ")");
    }
    if (!seen.insert(q).second) {
      throw InvalidCircuitError(name + ": repeated qubit " + std::to_string(q));
    }
  }
  if (inst.kind == GateKind::Measure) {
    if (!inst.clbit || *inst.clbit < 0 || *inst.clbit >= num_clbits) {
      throw InvalidCircuitError("measure: classical bit out of range");
    }
  } else if (inst.clbit) {
    throw InvalidCircuitError(name + ": only measure may target a classical bit");
  }
}

Circuit::Circuit(int num_qubits, int num_clbits, std::string name)
    : num_qubits_(num_qubits), num_clbits_(num_clbits), name_(std::move(name)) {
  if (num_qubits < 0 || num_clbits < 0) {
    throw InvalidCircuitError("negative register size");
  }
}

void Circuit::append(Instruction inst) {
  validate_instruction(inst, num_qubits_, num_clbits_);
  ops_.push_back(std::move(inst));
}

Circuit& Circuit::gate(GateKind kind, std::vector<Qubit> qubits,
                       std::vector<double> params) {
  append(make_gate(kind, std::move(qubits), std::move(params)));
  return *this;
}

Circuit& Circuit::measure(Qubit qubit, Clbit clbit) {
  append(make_measure(qubit, clbit));
  return *this;
}

Circuit& Circuit::measure_all() {
  if (num_clbits_ < num_qubits_) {
    num_clbits_ = num_qubits_;
  }
  for (Qubit q = 0; q < num_qubits_; ++q) {
    append(make_measure(q, q));
  }
  return *this;
}

Circuit& Circuit::barrier(std::vector<Qubit> qubits) {
  append(make_barrier(std::move(qubits)));
  return *this;
}

std::size_t Circuit::gate_count() const {
  return static_cast<std::size_t>(std::count_if(
      ops_.begin(), ops_.end(), [](const Instruction& i) { return i.is_gate(); }));
}

std::size_t Circuit::multi_qubit_gate_count() const {
  return static_cast<std::size_t>(
      std::count_if(ops_.begin(), ops_.end(),
                    [](const Instruction& i) { return i.is_multi_qubit_gate(); }));
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(ops_.begin(), ops_.end(),
                    [kind](const Instruction& i) { return i.kind == kind; }));
}

Circuit Circuit::without_directives() const {
  Circuit out(num_qubits_, num_clbits_, name_);
  for (const auto& op : ops_) {
    if (op.is_gate()) {
      out.ops_.push_back(op);
    }
  }
  return out;
}

Circuit Circuit::with_ops(std::vector<Instruction> ops) const {
  Circuit out(num_qubits_, num_clbits_, name_);
  out.ops_.reserve(ops.size());
  for (auto& op : ops) {
    out.append(std::move(op));
  }
  return out;
}

}  // namespace qpredict
