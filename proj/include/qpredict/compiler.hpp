// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/circuit.hpp"
#include "qpredict/device.hpp"

#include <span>
#include <string>
#include <vector>

namespace qpredict {

/// Compiler family A is graded by optimization level, family B by initial
/// placement strategy.
enum class CompilerFamily { A, B };

enum class Setting { O0, O1, O2, O3, Line, Graph };

std::string_view setting_name(Setting s);

/// One leaf of the option tree: device x family x setting.
struct CompilationOption {
  std::string device_id;
  CompilerFamily family = CompilerFamily::A;
  Setting setting = Setting::O0;

  /// `<device>/<family>/<setting>`, e.g. `dev8/A/O3`.
  std::string id() const;
  static CompilationOption parse(const std::string& id);

  bool operator==(const CompilationOption&) const = default;
};

/// |devices| x 6 options: per device A/O0..O3 then B/line, B/graph.
std::vector<CompilationOption> enumerate_options(std::span<const DeviceModel> devices);

using Layout = std::vector<Qubit>;  ///< logical -> physical

struct CompileStats {
  int swaps = 0;
  std::size_t native_gate_count = 0;
  bool placement_fallback = false;  ///< line placement found no long-enough path
  double compile_seconds = 0.0;
};

struct CompiledResult {
  Circuit circuit;         ///< device-legal, one wire per physical qubit
  Layout initial_layout;
  Layout final_layout;     ///< after routing SWAPs
  CompilationOption option;
  CompileStats stats;

  /// Equality of everything except wall-clock time.
  bool same_output(const CompiledResult& other) const;
};

/// Rewrites three-qubit gates (ccx, cswap) into one- and two-qubit gates.
Circuit unroll_three_qubit_gates(const Circuit& c);

/// Lowers every gate to `d.native_gates`, gate by gate. Gates already
/// native are kept as they are. Two-qubit gates on a pair that is coupled
/// only in the reverse direction are flipped when the gate is not
/// symmetric. Throws DecompositionError when a gate cannot be lowered.
Circuit decompose_to_native(const Circuit& c, const DeviceModel& d);

Layout place_trivial(const Circuit& c, const DeviceModel& d);

struct LinePlacement {
  Layout layout;
  bool fallback = false;
};
/// Maps logical qubits onto a simple path of the coupling graph; logical
/// qubits are laid out along the path by descending interaction degree.
LinePlacement place_line(const Circuit& c, const DeviceModel& d);

/// Greedy embedding of the interaction graph, heaviest edges first;
/// qubits that cannot be matched go to the nearest free physical qubit.
Layout place_graph(const Circuit& c, const DeviceModel& d);

/// All-pairs hop distances of the (undirected) coupling graph.
std::vector<std::vector<int>> coupling_distances(const DeviceModel& d);

struct RoutedCircuit {
  Circuit circuit;  ///< over d.num_qubits wires, with `swap` gates inserted
  Layout initial_layout;
  Layout final_layout;
  int swaps = 0;
};

/// Inserts SWAPs so every two-qubit gate acts on coupled physical qubits.
/// The input must not contain gates on three or more qubits.
RoutedCircuit route(const Circuit& c, const DeviceModel& d, const Layout& layout);

enum class OptLevel { O0 = 0, O1 = 1, O2 = 2, O3 = 3 };

/// O0: unchanged. O1: cancel adjacent self-inverse pairs and drop identity
/// rotations. O2: also fuse adjacent rotations about the same axis.
/// O3: also cancel and fuse across commuting gates and orient routed SWAP
/// triples so they reuse a neighbouring CX. Each level starts from the
/// previous level's output, so gate counts never increase with the level.
Circuit optimize(const Circuit& c, OptLevel level);

/// Full pipeline for one option. Throws InfeasibleError when the circuit
/// is wider than the option's device.
CompiledResult compile(const Circuit& c, const CompilationOption& opt,
                       std::span<const DeviceModel> devices);

/// Every two-qubit gate on a coupled pair and every kind native.
bool is_device_legal(const Circuit& c, const DeviceModel& d);

}  // namespace qpredict
