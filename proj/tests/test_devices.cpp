// SPDX-License-Identifier: MIT

#include "qpredict/device.hpp"
#include "qpredict/errors.hpp"

#include <gtest/gtest.h>

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <queue>

using namespace qpredict;
using nlohmann::json;

namespace {

json ion_trap_doc() {
  return {{"id", "trap"},
          {"technology", "ion-trap"},
          {"num_qubits", 11},
          {"native_gates", {"rx", "ry", "rz", "rxx", "measure"}},
          {"defaults", {{"single_qubit", 0.999}, {"two_qubit", 0.97}, {"readout", 0.99}}}};
}

json line_doc() {
  return {{"id", "line8"},
          {"technology", "superconducting"},
          {"num_qubits", 8},
          {"coupling", {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}}},
          {"native_gates", {"rz", "sx", "x", "cx", "measure"}},
          {"defaults", {{"single_qubit", 0.999}, {"two_qubit", 0.99}, {"readout", 0.97}}}};
}

// Reachability from qubit 0 over undirected edges, written independently of
// the library helper.
std::size_t reachable(const DeviceModel& d) {
  std::vector<std::vector<Qubit>> adj(static_cast<std::size_t>(d.num_qubits));
  for (const auto& [a, b] : d.coupling) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> seen(adj.size(), false);
  std::queue<Qubit> q;
  q.push(0);
  seen[0] = true;
  std::size_t count = 0;
  while (!q.empty()) {
    const Qubit u = q.front();
    q.pop();
    ++count;
    for (Qubit v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        q.push(v);
      }
    }
  }
  return count;
}

}  // namespace

TEST(BuiltinDevices, FiveDevicesWithExpectedSizes) {
  const auto& fleet = builtin_devices();
  ASSERT_EQ(fleet.size(), 5u);
  std::vector<int> sizes;
  for (const auto& d : fleet) sizes.push_back(d.num_qubits);
  EXPECT_EQ(sizes, (std::vector<int>{8, 11, 27, 80, 127}));
  int traps = 0;
  for (const auto& d : fleet) traps += d.technology == Technology::IonTrap ? 1 : 0;
  EXPECT_EQ(traps, 1);
}

TEST(BuiltinDevices, IonTrapIsComplete) {
  const auto& d = find_device(builtin_devices(), "dev11");
  EXPECT_EQ(d.technology, Technology::IonTrap);
  EXPECT_EQ(d.coupling.size(), 110u);
  for (Qubit q = 0; q < d.num_qubits; ++q) EXPECT_EQ(d.neighbors(q).size(), 10u);
  EXPECT_EQ(max_degree(d), 10);
}

TEST(BuiltinDevices, SuperconductingGraphsAreSparseAndConnected) {
  for (const auto& d : builtin_devices()) {
    if (d.technology != Technology::Superconducting) continue;
    SCOPED_TRACE(d.id);
    EXPECT_EQ(reachable(d), static_cast<std::size_t>(d.num_qubits));
    EXPECT_TRUE(is_connected(d));
    EXPECT_LE(max_degree(d), 3);
    for (const auto& [a, b] : d.coupling) EXPECT_TRUE(d.has_edge(b, a));
  }
}

TEST(BuiltinDevices, CalibrationsCoverNativeGates) {
  for (const auto& d : builtin_devices()) {
    SCOPED_TRACE(d.id);
    EXPECT_TRUE(d.is_native(GateKind::Measure));
    for (Qubit q = 0; q < d.num_qubits; ++q) {
      ASSERT_TRUE(d.calibration.readout(q).has_value());
      for (GateKind k : d.native_gates) {
        if (gate_info(k).num_qubits != 1 || is_directive(k)) continue;
        const Qubit qs[] = {q};
        const auto f = d.calibration.gate(k, qs);
        ASSERT_TRUE(f.has_value());
        EXPECT_GT(*f, 0.0);
        EXPECT_LE(*f, 1.0);
      }
    }
    for (const auto& [a, b] : d.coupling) {
      for (GateKind k : d.native_gates) {
        if (gate_info(k).num_qubits != 2) continue;
        const Qubit qs[] = {a, b};
        ASSERT_TRUE(d.calibration.gate(k, qs).has_value());
      }
    }
  }
}

TEST(BuiltinDevices, SuperconductingTwoQubitJitter) {
  const auto& d = find_device(builtin_devices(), "dev27");
  for (const auto& [a, b] : d.coupling) {
    const Qubit qs[] = {a, b};
    const double f = *d.calibration.gate(GateKind::CX, qs);
    EXPECT_GE(f, 0.985);
    EXPECT_LE(f, 0.995);
  }
  const Qubit q0[] = {0};
  EXPECT_DOUBLE_EQ(*d.calibration.gate(GateKind::SX, q0), 0.999);
  EXPECT_DOUBLE_EQ(*d.calibration.readout(0), 0.97);
}

TEST(BuiltinDevices, SerializationRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "qpredict_devices_rt";
  std::filesystem::create_directories(dir);
  for (const auto& d : builtin_devices()) {
    const auto path = dir / (d.id + ".json");
    write_device(d, path);
    EXPECT_EQ(load_device(path), d) << d.id;
  }
  const auto loaded = load_device_dir(dir);
  ASSERT_EQ(loaded.size(), builtin_devices().size());
  for (std::size_t i = 0; i < loaded.size(); ++i) EXPECT_EQ(loaded[i], builtin_devices()[i]);
  std::filesystem::remove_all(dir);
}

TEST(LoadDevice, IonTrapFileGetsCompleteCoupling) {
  const auto d = parse_device(ion_trap_doc().dump());
  EXPECT_EQ(d.coupling.size(), 110u);
  const Qubit pair[] = {3, 7};
  EXPECT_DOUBLE_EQ(*d.calibration.gate(GateKind::RXX, pair), 0.97);
}

TEST(LoadDevice, DefaultsFillReadout) {
  const auto d = parse_device(line_doc().dump());
  for (Qubit q = 0; q < 8; ++q) {
    ASSERT_TRUE(d.calibration.readout(q).has_value());
    EXPECT_DOUBLE_EQ(*d.calibration.readout(q), 0.97);
  }
  EXPECT_FALSE(d.has_edge(1, 0));
  EXPECT_TRUE(d.has_edge(0, 1));
}

TEST(LoadDevice, OverridesWinOverDefaults) {
  auto doc = line_doc();
  doc["gate_fidelities"] = {{{"gate", "cx"}, {"qubits", {2, 3}}, {"fidelity", 0.95}}};
  doc["readout_fidelities"] = {{{"qubit", 4}, {"fidelity", 0.9}}};
  const auto d = parse_device(doc.dump());
  const Qubit pair[] = {2, 3};
  EXPECT_DOUBLE_EQ(*d.calibration.gate(GateKind::CX, pair), 0.95);
  EXPECT_DOUBLE_EQ(*d.calibration.readout(4), 0.9);
  EXPECT_DOUBLE_EQ(*d.calibration.readout(5), 0.97);
}

TEST(LoadDevice, FidelityOutOfRange) {
  auto doc = line_doc();
  doc["gate_fidelities"] = {{{"gate", "cx"}, {"qubits", {0, 1}}, {"fidelity", 1.3}}};
  EXPECT_THROW(parse_device(doc.dump()), DeviceError);
  doc = line_doc();
  doc["defaults"]["readout"] = 0.0;
  EXPECT_THROW(parse_device(doc.dump()), DeviceError);
}

TEST(LoadDevice, SchemaErrors) {
  auto doc = line_doc();
  doc["coupling"].push_back({0, 8});
  EXPECT_THROW(parse_device(doc.dump()), DeviceError);

  doc = line_doc();
  doc.erase("num_qubits");
  EXPECT_THROW(parse_device(doc.dump()), DeviceError);

  doc = line_doc();
  doc["native_gates"] = {"rz", "sx", "measure"};
  EXPECT_THROW(parse_device(doc.dump()), DeviceError);

  doc = line_doc();
  doc["defaults"].erase("two_qubit");
  EXPECT_THROW(parse_device(doc.dump()), DeviceError);

  doc = ion_trap_doc();
  doc["coupling"] = {{0, 1}};
  EXPECT_THROW(parse_device(doc.dump()), DeviceError);

  doc = line_doc();
  doc["technology"] = "photonic";
  EXPECT_THROW(parse_device(doc.dump()), DeviceError);

  EXPECT_THROW(parse_device("{ not json"), DeviceError);
  EXPECT_THROW(load_device("/nonexistent/device.json"), DeviceError);
}

TEST(LoadDevice, CoherenceIsAcceptedAndKept) {
  auto doc = line_doc();
  doc["coherence"] = {{"t1_us", std::vector<double>(8, 100.0)}, {"t2_us", std::vector<double>(8, 80.0)}};
  const auto d = parse_device(doc.dump());
  EXPECT_EQ(d.t1_us.size(), 8u);
  EXPECT_EQ(parse_device(device_to_json(d)), d);
}

TEST(FindDevice, UnknownIdThrows) {
  EXPECT_EQ(find_device(builtin_devices(), "dev80").num_qubits, 80);
  EXPECT_THROW(find_device(builtin_devices(), "dev9"), DeviceError);
}
