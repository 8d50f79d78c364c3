// SPDX-License-Identifier: MIT

#include "qpredict/device.hpp"

#include "qpredict/errors.hpp"
#include "qpredict/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

namespace qpredict {

using nlohmann::json;

namespace {

constexpr const char* kDeviceFormat = "qpredict-device/1";

void check_fidelity(double f, const std::string& what) {
  if (!(f > 0.0 && f <= 1.0)) {
    throw DeviceError(what + ": fidelity " + std::to_string(f) +
                      " outside (0, 1]");
  }
}

}  // namespace

std::string_view technology_name(Technology t) {
  return t == Technology::IonTrap ? "ion-trap" : "superconducting";
}

std::uint64_t Calibration::key(GateKind kind, std::span<const Qubit> qubits) {
  std::uint64_t k = static_cast<std::uint64_t>(kind) << 48;
  const auto q0 = static_cast<std::uint64_t>(qubits.size() > 0 ? qubits[0] + 1 : 0);
  const auto q1 = static_cast<std::uint64_t>(qubits.size() > 1 ? qubits[1] + 1 : 0);
  return k | (q0 << 24) | q1;
}

void Calibration::set_gate(GateKind kind, std::span<const Qubit> qubits,
                           double fidelity) {
  if (qubits.size() > 2) {
    throw DeviceError("calibration entries cover at most two qubits");
  }
  gate_[key(kind, qubits)] = fidelity;
}

std::optional<double> Calibration::gate(GateKind kind,
                                        std::span<const Qubit> qubits) const {
  if (qubits.size() > 2) {
    return std::nullopt;
  }
  auto it = gate_.find(key(kind, qubits));
  if (it == gate_.end()) {
    return std::nullopt;
  }
  return it->second;
}

void Calibration::set_readout(Qubit q, double fidelity) {
  if (static_cast<std::size_t>(q) >= readout_.size()) {
    readout_.resize(static_cast<std::size_t>(q) + 1, 0.0);
  }
  readout_[q] = fidelity;
}

std::optional<double> Calibration::readout(Qubit q) const {
  if (q < 0 || static_cast<std::size_t>(q) >= readout_.size() || readout_[q] == 0.0) {
    return std::nullopt;
  }
  return readout_[q];
}

std::vector<Calibration::GateEntry> Calibration::gate_entries() const {
  std::vector<GateEntry> out;
  out.reserve(gate_.size());
  for (const auto& [k, f] : gate_) {
    GateEntry e;
    e.kind = static_cast<GateKind>(k >> 48);
    const auto q0 = static_cast<Qubit>((k >> 24) & 0xFFFFFF);
    const auto q1 = static_cast<Qubit>(k & 0xFFFFFF);
    if (q0) e.qubits.push_back(q0 - 1);
    if (q1) e.qubits.push_back(q1 - 1);
    e.fidelity = f;
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const GateEntry& a, const GateEntry& b) {
    return std::tie(a.kind, a.qubits) < std::tie(b.kind, b.qubits);
  });
  return out;
}

void DeviceModel::finalize() {
  if (id.empty()) {
    throw DeviceError("device without id");
  }
  if (num_qubits <= 0) {
    throw DeviceError(id + ": num_qubits must be positive");
  }
  const auto n = static_cast<std::size_t>(num_qubits);
  std::sort(coupling.begin(), coupling.end());
  coupling.erase(std::unique(coupling.begin(), coupling.end()), coupling.end());
  adjacency_.assign(n * n, 0);
  neighbors_.assign(n, {});
  for (const auto& [a, b] : coupling) {
    if (a < 0 || b < 0 || a >= num_qubits || b >= num_qubits) {
      throw DeviceError(id + ": coupling pair (" + std::to_string(a) + ", " +
                        std::to_string(b) + ") out of range");
    }
    if (a == b) {
      throw DeviceError(id + ": self-coupling on qubit " + std::to_string(a));
    }
    adjacency_[static_cast<std::size_t>(a) * n + b] = 1;
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (adjacency_[a * n + b] || adjacency_[b * n + a]) {
        neighbors_[a].push_back(static_cast<Qubit>(b));
      }
    }
  }
  if (technology == Technology::IonTrap && coupling.size() != n * (n - 1)) {
    throw DeviceError(id + ": ion-trap devices require complete coupling");
  }

  std::sort(native_gates.begin(), native_gates.end());
  native_gates.erase(std::unique(native_gates.begin(), native_gates.end()),
                     native_gates.end());
  const bool has_two_qubit = std::any_of(
      native_gates.begin(), native_gates.end(),
      [](GateKind k) { return gate_info(k).num_qubits == 2; });
  if (native_gates.empty() || !has_two_qubit || !is_native(GateKind::Measure)) {
    throw DeviceError(id + ": native gate set needs a two-qubit gate and measure");
  }

  // Fill calibration gaps from defaults; reject anything out of range.
  for (GateKind k : native_gates) {
    const int arity = gate_info(k).num_qubits;
    if (k == GateKind::Measure) {
      continue;
    }
    if (arity == 1) {
      for (Qubit q = 0; q < num_qubits; ++q) {
        const Qubit qs[] = {q};
        if (!calibration.gate(k, qs)) {
          if (!defaults.single_qubit) {
            throw DeviceError(id + ": no fidelity for " + std::string(gate_name(k)) +
                              " on qubit " + std::to_string(q));
          }
          calibration.set_gate(k, qs, *defaults.single_qubit);
        }
      }
    } else if (arity == 2) {
      for (const auto& [a, b] : coupling) {
        const Qubit qs[] = {a, b};
        if (!calibration.gate(k, qs)) {
          if (!defaults.two_qubit) {
            throw DeviceError(id + ": no fidelity for " + std::string(gate_name(k)) +
                              " on (" + std::to_string(a) + ", " +
                              std::to_string(b) + ")");
          }
          calibration.set_gate(k, qs, *defaults.two_qubit);
        }
      }
    } else {
      throw DeviceError(id + ": native gates must act on one or two qubits");
    }
  }
  for (Qubit q = 0; q < num_qubits; ++q) {
    if (!calibration.readout(q)) {
      if (!defaults.readout) {
        throw DeviceError(id + ": no readout fidelity for qubit " + std::to_string(q));
      }
      calibration.set_readout(q, *defaults.readout);
    }
  }
  if (calibration.readout_entries().size() != n) {
    throw DeviceError(id + ": readout entry for a qubit outside the device");
  }
  for (const auto& e : calibration.gate_entries()) {
    for (Qubit q : e.qubits) {
      if (q >= num_qubits) {
        throw DeviceError(id + ": calibration entry on qubit " + std::to_string(q) +
                          " out of range");
      }
    }
    check_fidelity(e.fidelity, id + " " + std::string(gate_name(e.kind)));
  }
  for (double f : calibration.readout_entries()) {
    check_fidelity(f, id + " readout");
  }
}

bool DeviceModel::is_native(GateKind kind) const {
  return std::binary_search(native_gates.begin(), native_gates.end(), kind);
}

namespace {

GateKind parse_gate(const std::string& name, const std::string& where) {
  auto kind = gate_from_name(name);
  if (!kind || *kind == GateKind::Barrier) {
    throw DeviceError(where + ": unknown gate '" + name + "'");
  }
  return *kind;
}

std::optional<double> optional_fidelity(const json& obj, const char* key,
                                        const std::string& where) {
  if (!obj.contains(key)) {
    return std::nullopt;
  }
  const double f = obj.at(key).get<double>();
  check_fidelity(f, where + " default " + key);
  return f;
}

}  // namespace

DeviceModel parse_device(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DeviceError(std::string("device file is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) {
      throw DeviceError("device file must be a JSON object");
    }
    if (doc.contains("format") && doc.at("format") != kDeviceFormat) {
      throw DeviceError("unsupported device format " + doc.at("format").dump());
    }
    DeviceModel d;
    d.id = doc.at("id").get<std::string>();
    const auto tech = doc.at("technology").get<std::string>();
    if (tech == "superconducting") {
      d.technology = Technology::Superconducting;
    } else if (tech == "ion-trap") {
      d.technology = Technology::IonTrap;
    } else {
      throw DeviceError(d.id + ": unknown technology '" + tech + "'");
    }
    d.num_qubits = doc.at("num_qubits").get<int>();
    if (d.num_qubits <= 0) {
      throw DeviceError(d.id + ": num_qubits must be positive");
    }
    const json coupling = doc.value("coupling", json());
    if (coupling.is_null() || coupling == "all") {
      if (d.technology != Technology::IonTrap && coupling.is_null()) {
        throw DeviceError(d.id + ": superconducting devices need a coupling list");
      }
      for (Qubit a = 0; a < d.num_qubits; ++a) {
        for (Qubit b = 0; b < d.num_qubits; ++b) {
          if (a != b) d.coupling.emplace_back(a, b);
        }
      }
    } else {
      for (const auto& pair : coupling) {
        if (!pair.is_array() || pair.size() != 2) {
          throw DeviceError(d.id + ": coupling entries must be [a, b] pairs");
        }
        d.coupling.emplace_back(pair[0].get<int>(), pair[1].get<int>());
      }
    }
    for (const auto& g : doc.at("native_gates")) {
      d.native_gates.push_back(parse_gate(g.get<std::string>(), d.id));
    }
    if (doc.contains("defaults")) {
      const auto& def = doc.at("defaults");
      d.defaults.single_qubit = optional_fidelity(def, "single_qubit", d.id);
      d.defaults.two_qubit = optional_fidelity(def, "two_qubit", d.id);
      d.defaults.readout = optional_fidelity(def, "readout", d.id);
    }
    for (const auto& e : doc.value("gate_fidelities", json::array())) {
      const GateKind k = parse_gate(e.at("gate").get<std::string>(), d.id);
      const auto qubits = e.at("qubits").get<std::vector<int>>();
      const double f = e.at("fidelity").get<double>();
      check_fidelity(f, d.id + " " + std::string(gate_name(k)));
      if (qubits.size() != static_cast<std::size_t>(gate_info(k).num_qubits)) {
        throw DeviceError(d.id + ": fidelity entry for " + std::string(gate_name(k)) +
                          " has wrong qubit count");
      }
      for (int q : qubits) {
        if (q < 0 || q >= d.num_qubits) {
          throw DeviceError(d.id + ": fidelity entry qubit " + std::to_string(q) +
                            " out of range");
        }
      }
      d.calibration.set_gate(k, qubits, f);
    }
    for (const auto& e : doc.value("readout_fidelities", json::array())) {
      const int q = e.at("qubit").get<int>();
      const double f = e.at("fidelity").get<double>();
      check_fidelity(f, d.id + " readout");
      if (q < 0 || q >= d.num_qubits) {
        throw DeviceError(d.id + ": readout entry qubit out of range");
      }
      d.calibration.set_readout(q, f);
    }
    if (doc.contains("coherence")) {
      const auto& coh = doc.at("coherence");
      d.t1_us = coh.value("t1_us", std::vector<double>{});
      d.t2_us = coh.value("t2_us", std::vector<double>{});
    }
    d.finalize();
    return d;
  } catch (const json::exception& e) {
    throw DeviceError(std::string("device file schema violation: ") + e.what());
  }
}

DeviceModel load_device(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DeviceError("cannot open device file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_device(ss.str());
}

std::string device_to_json(const DeviceModel& d) {
  json doc;
  doc["format"] = kDeviceFormat;
  doc["id"] = d.id;
  doc["technology"] = std::string(technology_name(d.technology));
  doc["num_qubits"] = d.num_qubits;
  json coupling = json::array();
  for (const auto& [a, b] : d.coupling) {
    coupling.push_back({a, b});
  }
  doc["coupling"] = coupling;
  json natives = json::array();
  for (GateKind k : d.native_gates) {
    natives.push_back(std::string(gate_name(k)));
  }
  doc["native_gates"] = natives;
  json defaults = json::object();
  if (d.defaults.single_qubit) defaults["single_qubit"] = *d.defaults.single_qubit;
  if (d.defaults.two_qubit) defaults["two_qubit"] = *d.defaults.two_qubit;
  if (d.defaults.readout) defaults["readout"] = *d.defaults.readout;
  doc["defaults"] = defaults;
  json gates = json::array();
  for (const auto& e : d.calibration.gate_entries()) {
    gates.push_back({{"gate", std::string(gate_name(e.kind))},
                     {"qubits", e.qubits},
                     {"fidelity", e.fidelity}});
  }
  doc["gate_fidelities"] = gates;
  json readout = json::array();
  const auto& r = d.calibration.readout_entries();
  for (std::size_t q = 0; q < r.size(); ++q) {
    readout.push_back({{"qubit", q}, {"fidelity", r[q]}});
  }
  doc["readout_fidelities"] = readout;
  if (!d.t1_us.empty() || !d.t2_us.empty()) {
    doc["coherence"] = {{"t1_us", d.t1_us}, {"t2_us", d.t2_us}};
  }
  return doc.dump(1);
}

void write_device(const DeviceModel& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DeviceError("cannot write " + path.string());
  }
  out << device_to_json(d) << '\n';
}

std::vector<DeviceModel> load_device_dir(const std::filesystem::path& dir) {
  std::vector<DeviceModel> devices;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    devices.push_back(load_device(f));
  }
  if (devices.empty()) {
    throw DeviceError("no device files in " + dir.string());
  }
  std::stable_sort(devices.begin(), devices.end(),
                   [](const DeviceModel& a, const DeviceModel& b) {
                     return std::tie(a.num_qubits, a.id) < std::tie(b.num_qubits, b.id);
                   });
  for (std::size_t i = 1; i < devices.size(); ++i) {
    if (devices[i].id == devices[i - 1].id) {
      throw DeviceError("duplicate device id " + devices[i].id);
    }
  }
  return devices;
}

namespace {

using Edges = std::vector<std::pair<Qubit, Qubit>>;

Edges ring(int n) {
  Edges e;
  for (int i = 0; i < n; ++i) {
    e.emplace_back(i, (i + 1) % n);
  }
  return e;
}

// 27-qubit heavy-hex (Falcon layout).
Edges falcon27() {
  return {{0, 1},   {1, 2},   {1, 4},   {2, 3},   {3, 5},   {4, 7},   {5, 8},
          {6, 7},   {7, 10},  {8, 9},   {8, 11},  {10, 12}, {11, 14}, {12, 13},
          {12, 15}, {13, 14}, {14, 16}, {15, 18}, {16, 19}, {17, 18}, {18, 21},
          {19, 20}, {19, 22}, {21, 23}, {22, 25}, {23, 24}, {24, 25}, {25, 26}};
}

// 127-qubit heavy-hex (Eagle layout): seven rows joined by four bridge
// qubits each. Row 0 spans columns 0-13, rows 1-5 columns 0-14, row 6
// columns 1-14; bridges alternate between columns {0,4,8,12} and
// {2,6,10,14}.
Edges eagle127() {
  Edges e;
  int next = 0;
  std::vector<std::vector<int>> rows(7, std::vector<int>(15, -1));
  std::vector<std::vector<int>> bridges(6);
  for (int r = 0; r < 7; ++r) {
    const int first = r == 6 ? 1 : 0;
    const int last = r == 0 ? 13 : 14;
    for (int c = first; c <= last; ++c) {
      rows[r][c] = next++;
      if (c > first) {
        e.emplace_back(rows[r][c - 1], rows[r][c]);
      }
    }
    if (r < 6) {
      for (int k = 0; k < 4; ++k) {
        bridges[r].push_back(next++);
      }
    }
  }
  for (int r = 0; r < 6; ++r) {
    const int offset = r % 2 == 0 ? 0 : 2;
    for (int k = 0; k < 4; ++k) {
      const int c = offset + 4 * k;
      e.emplace_back(rows[r][c], bridges[r][k]);
      e.emplace_back(bridges[r][k], rows[r + 1][c]);
    }
  }
  return e;
}

// 80 qubits as a 2 x 5 grid of 8-qubit rings. Ring positions 1,2 link to
// the right neighbour's 6,5 and positions 3,4 to the lower neighbour's 0,7,
// which keeps every qubit at degree <= 3.
Edges octagons80() {
  Edges e;
  auto at = [](int row, int col, int pos) { return (row * 5 + col) * 8 + pos; };
  for (int row = 0; row < 2; ++row) {
    for (int col = 0; col < 5; ++col) {
      for (int p = 0; p < 8; ++p) {
        e.emplace_back(at(row, col, p), at(row, col, (p + 1) % 8));
      }
      if (col + 1 < 5) {
        e.emplace_back(at(row, col, 1), at(row, col + 1, 6));
        e.emplace_back(at(row, col, 2), at(row, col + 1, 5));
      }
      if (row + 1 < 2) {
        e.emplace_back(at(row, col, 3), at(row + 1, col, 0));
        e.emplace_back(at(row, col, 4), at(row + 1, col, 7));
      }
    }
  }
  return e;
}

DeviceModel superconducting(const std::string& id, int n, const Edges& undirected,
                            std::uint64_t seed) {
  DeviceModel d;
  d.id = id;
  d.technology = Technology::Superconducting;
  d.num_qubits = n;
  d.native_gates = {GateKind::RZ, GateKind::SX, GateKind::X, GateKind::CX,
                    GateKind::Measure};
  d.defaults = {0.999, 0.99, 0.97};
  // Two-qubit fidelities: 0.99 +/- 0.005, one draw per undirected edge.
  CounterRng rng(seed);
  Edges sorted = undirected;
  for (auto& [a, b] : sorted) {
    if (a > b) std::swap(a, b);
  }
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [a, b] : sorted) {
    const double f = 0.99 + (rng.uniform() - 0.5) * 0.01;
    const Qubit ab[] = {a, b};
    const Qubit ba[] = {b, a};
    d.calibration.set_gate(GateKind::CX, ab, f);
    d.calibration.set_gate(GateKind::CX, ba, f);
    d.coupling.emplace_back(a, b);
    d.coupling.emplace_back(b, a);
  }
  d.finalize();
  return d;
}

DeviceModel ion_trap(const std::string& id, int n) {
  DeviceModel d;
  d.id = id;
  d.technology = Technology::IonTrap;
  d.num_qubits = n;
  d.native_gates = {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::RXX,
                    GateKind::Measure};
  d.defaults = {0.9995, 0.973, 0.996};
  for (Qubit a = 0; a < n; ++a) {
    for (Qubit b = 0; b < n; ++b) {
      if (a != b) d.coupling.emplace_back(a, b);
    }
  }
  d.finalize();
  return d;
}

}  // namespace

const std::vector<DeviceModel>& builtin_devices() {
  static const std::vector<DeviceModel> devices = [] {
    std::vector<DeviceModel> v;
    v.push_back(superconducting("dev8", 8, ring(8), 8));
    v.push_back(ion_trap("dev11", 11));
    v.push_back(superconducting("dev27", 27, falcon27(), 27));
    v.push_back(superconducting("dev80", 80, octagons80(), 80));
    v.push_back(superconducting("dev127", 127, eagle127(), 127));
    return v;
  }();
  return devices;
}

const DeviceModel& find_device(std::span<const DeviceModel> devices,
                               const std::string& id) {
  for (const auto& d : devices) {
    if (d.id == id) {
      return d;
    }
  }
  throw DeviceError("unknown device '" + id + "'");
}

bool is_connected(const DeviceModel& d) {
  std::vector<bool> seen(static_cast<std::size_t>(d.num_qubits), false);
  std::queue<Qubit> todo;
  todo.push(0);
  seen[0] = true;
  int count = 1;
  while (!todo.empty()) {
    const Qubit q = todo.front();
    todo.pop();
    for (Qubit nb : d.neighbors(q)) {
      if (!seen[nb]) {
        seen[nb] = true;
        ++count;
        todo.push(nb);
      }
    }
  }
  return count == d.num_qubits;
}

int max_degree(const DeviceModel& d) {
  int best = 0;
  for (Qubit q = 0; q < d.num_qubits; ++q) {
    best = std::max(best, static_cast<int>(d.neighbors(q).size()));
  }
  return best;
}

}  // namespace qpredict
