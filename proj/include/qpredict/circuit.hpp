// SPDX-License-Identifier: MIT

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qpredict {

using Qubit = int;
using Clbit = int;

/// Gate vocabulary: the OpenQASM 2.0 standard header gates up to three
/// qubits, plus the `measure` and `barrier` directives.
enum class GateKind {
  // single-qubit
  Id, X, Y, Z, H, S, Sdg, T, Tdg, SX, SXdg, RX, RY, RZ, P, U1, U2, U3, U,
  // two-qubit
  CX, CY, CZ, CH, Swap, CRX, CRY, CRZ, CP, CU1, CU3, CSX, CU, RXX, RZZ,
  // three-qubit
  CCX, CSwap,
  // directives
  Measure, Barrier,
};

inline constexpr std::size_t kNumGateKinds =
    static_cast<std::size_t>(GateKind::Barrier) + 1;

struct GateInfo {
  std::string_view name;
  int num_qubits;  ///< -1 for barrier (any arity)
  int num_params;
};

const GateInfo& gate_info(GateKind kind);
std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_from_name(std::string_view name);

/// Every unitary gate kind, in declaration order. Excludes measure/barrier.
std::span<const GateKind> unitary_gate_kinds();

inline bool is_directive(GateKind kind) {
  return kind == GateKind::Measure || kind == GateKind::Barrier;
}

struct Instruction {
  GateKind kind = GateKind::Id;
  std::vector<Qubit> qubits;
  std::vector<double> params;
  std::optional<Clbit> clbit;

  bool is_gate() const { return !is_directive(kind); }
  bool is_multi_qubit_gate() const { return is_gate() && qubits.size() >= 2; }

  bool operator==(const Instruction&) const = default;
};

Instruction make_gate(GateKind kind, std::vector<Qubit> qubits,
                      std::vector<double> params = {});
Instruction make_measure(Qubit qubit, Clbit clbit);
Instruction make_barrier(std::vector<Qubit> qubits);

/// Flat gate-list circuit. Instructions are appended through `append`,
/// which validates arity, parameter count, qubit distinctness and bounds.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int num_qubits, int num_clbits = 0, std::string name = {});

  int num_qubits() const { return num_qubits_; }
  int num_clbits() const { return num_clbits_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const std::vector<Instruction>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }

  void append(Instruction inst);
  Circuit& gate(GateKind kind, std::vector<Qubit> qubits,
                std::vector<double> params = {});
  Circuit& measure(Qubit qubit, Clbit clbit);
  Circuit& measure_all();
  Circuit& barrier(std::vector<Qubit> qubits);

  /// Unitary gates only (measure and barrier excluded).
  std::size_t gate_count() const;
  std::size_t multi_qubit_gate_count() const;
  std::size_t count(GateKind kind) const;

  /// Copy of this circuit with every measure and barrier removed.
  Circuit without_directives() const;

  /// Rebuild with the same registers and a new op list; validates each op.
  Circuit with_ops(std::vector<Instruction> ops) const;

  bool operator==(const Circuit& other) const {
    return num_qubits_ == other.num_qubits_ &&
           num_clbits_ == other.num_clbits_ && ops_ == other.ops_;
  }

 private:
  int num_qubits_ = 0;
  int num_clbits_ = 0;
  std::string name_;
  std::vector<Instruction> ops_;
};

/// Throws InvalidCircuitError if `inst` is malformed for the given widths.
void validate_instruction(const Instruction& inst, int num_qubits,
                          int num_clbits);

}  // namespace qpredict
