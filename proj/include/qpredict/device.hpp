// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/circuit.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qpredict {

enum class Technology { Superconducting, IonTrap };

std::string_view technology_name(Technology t);

/// Per-gate-class fallback fidelities used to fill calibration gaps.
struct FidelityDefaults {
  std::optional<double> single_qubit;
  std::optional<double> two_qubit;
  std::optional<double> readout;

  bool operator==(const FidelityDefaults&) const = default;
};

/// Gate fidelities keyed by (gate kind, exact physical qubit tuple) and
/// readout fidelities per qubit. All values lie in (0, 1].
class Calibration {
 public:
  void set_gate(GateKind kind, std::span<const Qubit> qubits, double fidelity);
  std::optional<double> gate(GateKind kind, std::span<const Qubit> qubits) const;

  void set_readout(Qubit q, double fidelity);
  std::optional<double> readout(Qubit q) const;

  struct GateEntry {
    GateKind kind;
    std::vector<Qubit> qubits;
    double fidelity;
  };
  /// Entries sorted by (kind, qubits) for stable serialization.
  std::vector<GateEntry> gate_entries() const;
  const std::vector<double>& readout_entries() const { return readout_; }

  bool operator==(const Calibration& other) const {
    return gate_ == other.gate_ && readout_ == other.readout_;
  }

 private:
  static std::uint64_t key(GateKind kind, std::span<const Qubit> qubits);

  std::unordered_map<std::uint64_t, double> gate_;
  std::vector<double> readout_;  // 0 marks "unset"
};

/// A compilation target: coupling graph, native gate set and calibration.
/// Construct through `finalize`, which validates the invariants, fills
/// calibration gaps from the defaults and builds the adjacency index.
struct DeviceModel {
  std::string id;
  Technology technology = Technology::Superconducting;
  int num_qubits = 0;
  std::vector<std::pair<Qubit, Qubit>> coupling;  ///< directed, sorted
  std::vector<GateKind> native_gates;              ///< sorted
  FidelityDefaults defaults;
  Calibration calibration;
  std::vector<double> t1_us;  ///< accepted but unused by scoring
  std::vector<double> t2_us;

  void finalize();

  bool is_native(GateKind kind) const;
  /// Directed edge a -> b present.
  bool has_edge(Qubit a, Qubit b) const {
    return adjacency_[static_cast<std::size_t>(a) * num_qubits + b] != 0;
  }
  /// Coupled in at least one direction.
  bool coupled(Qubit a, Qubit b) const { return has_edge(a, b) || has_edge(b, a); }
  const std::vector<Qubit>& neighbors(Qubit q) const { return neighbors_[q]; }

  bool operator==(const DeviceModel& o) const {
    return id == o.id && technology == o.technology &&
           num_qubits == o.num_qubits && coupling == o.coupling &&
           native_gates == o.native_gates && defaults == o.defaults &&
           calibration == o.calibration && t1_us == o.t1_us && t2_us == o.t2_us;
  }

 private:
  std::vector<char> adjacency_;
  std::vector<std::vector<Qubit>> neighbors_;  // undirected, ascending
};

DeviceModel load_device(const std::filesystem::path& path);
DeviceModel parse_device(const std::string& text);
std::string device_to_json(const DeviceModel& d);
void write_device(const DeviceModel& d, const std::filesystem::path& path);

/// All `*.json` device files of a directory, ordered by qubit count then id.
std::vector<DeviceModel> load_device_dir(const std::filesystem::path& dir);

/// The five-device fleet: superconducting 8/27/80/127-qubit targets with
/// sparse (max degree 3) coupling and an 11-qubit all-to-all ion trap.
/// Ordered by qubit count.
const std::vector<DeviceModel>& builtin_devices();

const DeviceModel& find_device(std::span<const DeviceModel> devices,
                               const std::string& id);

/// Coupling-graph helpers used by placement, routing and tests.
bool is_connected(const DeviceModel& d);
int max_degree(const DeviceModel& d);

}  // namespace qpredict
