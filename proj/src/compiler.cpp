// SPDX-License-Identifier: MIT

#include "qpredict/compiler.hpp"

#include "qpredict/errors.hpp"
#include "qpredict/statevector.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace qpredict {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSynthEps = 1e-12;

using Ops = std::vector<Instruction>;

Instruction g(GateKind k, std::vector<Qubit> q, std::vector<double> p = {}) {
  return make_gate(k, std::move(q), std::move(p));
}

// Standard-header definitions of every non-elementary gate in terms of
// cx and single-qubit gates.
Ops expand(const Instruction& op) {
  const auto& q = op.qubits;
  const auto& p = op.params;
  switch (op.kind) {
    case GateKind::CY: {
      const Qubit a = q[0], b = q[1];
      return {g(GateKind::Sdg, {b}), g(GateKind::CX, {a, b}), g(GateKind::S, {b})};
    }
    case GateKind::CZ: {
      const Qubit a = q[0], b = q[1];
      return {g(GateKind::H, {b}), g(GateKind::CX, {a, b}), g(GateKind::H, {b})};
    }
    case GateKind::CH: {
      const Qubit a = q[0], b = q[1];
      return {g(GateKind::S, {b}),  g(GateKind::H, {b}),   g(GateKind::T, {b}),
              g(GateKind::CX, {a, b}), g(GateKind::Tdg, {b}), g(GateKind::H, {b}),
              g(GateKind::Sdg, {b})};
    }
    case GateKind::Swap: {
      const Qubit a = q[0], b = q[1];
      return {g(GateKind::CX, {a, b}), g(GateKind::CX, {b, a}), g(GateKind::CX, {a, b})};
    }
    case GateKind::CRX: {
      const Qubit a = q[0], b = q[1];
      return {g(GateKind::U1, {b}, {kPi / 2}), g(GateKind::CX, {a, b}),
              g(GateKind::U3, {b}, {-p[0] / 2, 0, 0}), g(GateKind::CX, {a, b}),
              g(GateKind::U3, {b}, {p[0] / 2, -kPi / 2, 0})};
    }
    case GateKind::CRY: {
      const Qubit a = q[0], b = q[1];
      return {g(GateKind::RY, {b}, {p[0] / 2}), g(GateKind::CX, {a, b}),
              g(GateKind::RY, {b}, {-p[0] / 2}), g(GateKind::CX, {a, b})};
    }
    case GateKind::CRZ: {
      const Qubit a = q[0], b = q[1];
      return {g(GateKind::RZ, {b}, {p[0] / 2}), g(GateKind::CX, {a, b}),
              g(GateKind::RZ, {b}, {-p[0] / 2}), g(GateKind::CX, {a, b})};
    }
    case GateKind::CP:
    case GateKind::CU1: {
      const Qubit a = q[0], b = q[1];
      return {g(GateKind::U1, {a}, {p[0] / 2}), g(GateKind::CX, {a, b}),
              g(GateKind::U1, {b}, {-p[0] / 2}), g(GateKind::CX, {a, b}),
              g(GateKind::U1, {b}, {p[0] / 2})};
    }
    case GateKind::CU3:
    case GateKind::CU: {
      const Qubit a = q[0], b = q[1];
      const double theta = p[0], phi = p[1], lambda = p[2];
      Ops out;
      if (op.kind == GateKind::CU) {
        out.push_back(g(GateKind::P, {a}, {p[3]}));
      }
      for (auto& x : Ops{g(GateKind::U1, {a}, {(lambda + phi) / 2}),
                         g(GateKind::U1, {b}, {(lambda - phi) / 2}),
                         g(GateKind::CX, {a, b}),
                         g(GateKind::U3, {b}, {-theta / 2, 0, -(phi + lambda) / 2}),
                         g(GateKind::CX, {a, b}),
                         g(GateKind::U3, {b}, {theta / 2, phi, 0})}) {
        out.push_back(std::move(x));
      }
      return out;
    }
    case GateKind::CSX: {
      const Qubit a = q[0], b = q[1];
      return {g(GateKind::H, {b}), g(GateKind::CU1, {a, b}, {kPi / 2}), g(GateKind::H, {b})};
    }
    case GateKind::RXX: {
      const Qubit a = q[0], b = q[1];
      return {g(GateKind::H, {a}), g(GateKind::H, {b}), g(GateKind::CX, {a, b}),
              g(GateKind::RZ, {b}, {p[0]}), g(GateKind::CX, {a, b}),
              g(GateKind::H, {a}), g(GateKind::H, {b})};
    }
    case GateKind::RZZ: {
      const Qubit a = q[0], b = q[1];
      return {g(GateKind::CX, {a, b}), g(GateKind::RZ, {b}, {p[0]}), g(GateKind::CX, {a, b})};
    }
    case GateKind::CCX: {
      const Qubit a = q[0], b = q[1], c = q[2];
      return {g(GateKind::H, {c}),      g(GateKind::CX, {b, c}), g(GateKind::Tdg, {c}),
              g(GateKind::CX, {a, c}),  g(GateKind::T, {c}),     g(GateKind::CX, {b, c}),
              g(GateKind::Tdg, {c}),    g(GateKind::CX, {a, c}), g(GateKind::T, {b}),
              g(GateKind::T, {c}),      g(GateKind::H, {c}),     g(GateKind::CX, {a, b}),
              g(GateKind::T, {a}),      g(GateKind::Tdg, {b}),   g(GateKind::CX, {a, b})};
    }
    case GateKind::CSwap: {
      const Qubit a = q[0], b = q[1], c = q[2];
      return {g(GateKind::CX, {c, b}), g(GateKind::CCX, {a, b, c}), g(GateKind::CX, {c, b})};
    }
    default:
      throw DecompositionError("no expansion rule for " + std::string(gate_name(op.kind)));
  }
}

double wrap(double t) {
  t = std::fmod(t, 2 * kPi);
  if (t <= -kPi) t += 2 * kPi;
  if (t > kPi) t -= 2 * kPi;
  return t;
}

bool is_zero_angle(double t) { return std::abs(wrap(t)) < kSynthEps; }

struct EulerZYZ {
  double theta, phi, lambda;  // U ~ Rz(phi) Ry(theta) Rz(lambda)
};

EulerZYZ zyz_angles(const GateMatrix& u) {
  const Amplitude det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const Amplitude norm = std::sqrt(det);
  const Amplitude a = u(0, 0) / norm;
  const Amplitude b = u(1, 0) / norm;
  const double theta = 2 * std::atan2(std::abs(b), std::abs(a));
  if (std::abs(b) < kSynthEps) {
    return {0.0, 0.0, -2 * std::arg(a)};
  }
  if (std::abs(a) < kSynthEps) {
    return {theta, 2 * std::arg(b), 0.0};
  }
  const double sum = -2 * std::arg(a);
  const double diff = 2 * std::arg(b);
  return {theta, (sum + diff) / 2, (sum - diff) / 2};
}

bool matches(const GateMatrix& u, GateKind kind, std::vector<double> params = {}) {
  return equal_up_to_phase(u, gate_matrix(kind, params), 1e-10);
}

void push_rz(Ops& out, Qubit q, double t) {
  if (!is_zero_angle(t)) {
    out.push_back(g(GateKind::RZ, {q}, {wrap(t)}));
  }
}

// Synthesizes an arbitrary single-qubit unitary into the device basis.
void synthesize_1q(const GateMatrix& u, Qubit q, const DeviceModel& d, Ops& out) {
  if (matches(u, GateKind::Id)) {
    return;
  }
  const EulerZYZ e = zyz_angles(u);
  const bool rz = d.is_native(GateKind::RZ);
  if (rz && std::abs(e.theta) < kSynthEps) {
    push_rz(out, q, e.phi + e.lambda);
    return;
  }
  if (d.is_native(GateKind::X) && matches(u, GateKind::X)) {
    out.push_back(g(GateKind::X, {q}));
    return;
  }
  if (d.is_native(GateKind::SX) && matches(u, GateKind::SX)) {
    out.push_back(g(GateKind::SX, {q}));
    return;
  }
  for (GateKind axis : {GateKind::RX, GateKind::RY}) {
    if (!d.is_native(axis)) continue;
    for (double t : {e.theta, -e.theta}) {
      if (matches(u, axis, {t})) {
        out.push_back(g(axis, {q}, {t}));
        return;
      }
    }
  }
  if (d.is_native(GateKind::U3)) {
    out.push_back(g(GateKind::U3, {q}, {e.theta, e.phi, e.lambda}));
    return;
  }
  if (rz && d.is_native(GateKind::SX)) {
    if (std::abs(e.theta - kPi / 2) < kSynthEps) {
      push_rz(out, q, e.lambda - kPi / 2);
      out.push_back(g(GateKind::SX, {q}));
      push_rz(out, q, e.phi + kPi / 2);
    } else {
      push_rz(out, q, e.lambda);
      out.push_back(g(GateKind::SX, {q}));
      push_rz(out, q, e.theta + kPi);
      out.push_back(g(GateKind::SX, {q}));
      push_rz(out, q, e.phi + kPi);
    }
    return;
  }
  if (rz && d.is_native(GateKind::RY)) {
    push_rz(out, q, e.lambda);
    out.push_back(g(GateKind::RY, {q}, {e.theta}));
    push_rz(out, q, e.phi);
    return;
  }
  throw DecompositionError(d.id + ": native set cannot express single-qubit gates");
}

bool symmetric_two_qubit(GateKind k) {
  return k == GateKind::CZ || k == GateKind::Swap || k == GateKind::RXX ||
         k == GateKind::RZZ || k == GateKind::CP || k == GateKind::CU1;
}

void lower(const Instruction& op, const DeviceModel& d, Ops& out, int depth = 0) {
  if (depth > 16) {
    throw DecompositionError("decomposition of " + std::string(gate_name(op.kind)) +
                             " does not terminate for " + d.id);
  }
  if (op.kind == GateKind::Barrier) {
    out.push_back(op);
    return;
  }
  if (op.kind == GateKind::Measure) {
    if (!d.is_native(GateKind::Measure)) {
      throw DecompositionError(d.id + " cannot measure");
    }
    out.push_back(op);
    return;
  }
  const std::size_t arity = op.qubits.size();
  if (d.is_native(op.kind)) {
    if (arity == 2 && !d.has_edge(op.qubits[0], op.qubits[1]) &&
        d.has_edge(op.qubits[1], op.qubits[0])) {
      const Qubit a = op.qubits[0], b = op.qubits[1];
      if (symmetric_two_qubit(op.kind)) {
        Instruction flipped = op;
        flipped.qubits = {b, a};
        out.push_back(std::move(flipped));
        return;
      }
      if (op.kind == GateKind::CX) {
        for (const auto& x : Ops{g(GateKind::H, {a}), g(GateKind::H, {b}),
                                 g(GateKind::CX, {b, a}), g(GateKind::H, {a}),
                                 g(GateKind::H, {b})}) {
          lower(x, d, out, depth + 1);
        }
        return;
      }
      // Other directed native gates fall through to their expansion.
    } else {
      out.push_back(op);
      return;
    }
  }
  if (arity == 1) {
    synthesize_1q(gate_matrix(op), op.qubits[0], d, out);
    return;
  }
  if (op.kind == GateKind::CX) {
    const Qubit a = op.qubits[0], b = op.qubits[1];
    Ops seq;
    if (d.is_native(GateKind::RXX)) {
      seq = {g(GateKind::RY, {a}, {kPi / 2}), g(GateKind::RXX, {a, b}, {kPi / 2}),
             g(GateKind::RX, {a}, {-kPi / 2}), g(GateKind::RX, {b}, {-kPi / 2}),
             g(GateKind::RY, {a}, {-kPi / 2})};
    } else if (d.is_native(GateKind::CZ)) {
      seq = {g(GateKind::H, {b}), g(GateKind::CZ, {a, b}), g(GateKind::H, {b})};
    } else {
      throw DecompositionError(d.id + ": no entangling gate to express cx");
    }
    for (const auto& x : seq) {
      lower(x, d, out, depth + 1);
    }
    return;
  }
  for (const auto& x : expand(op)) {
    lower(x, d, out, depth + 1);
  }
}

}  // namespace

std::string_view setting_name(Setting s) {
  switch (s) {
    case Setting::O0: return "O0";
    case Setting::O1: return "O1";
    case Setting::O2: return "O2";
    case Setting::O3: return "O3";
    case Setting::Line: return "line";
    case Setting::Graph: return "graph";
  }
  return "?";
}

std::string CompilationOption::id() const {
  return device_id + (family == CompilerFamily::A ? "/A/" : "/B/") +
         std::string(setting_name(setting));
}

CompilationOption CompilationOption::parse(const std::string& id) {
  const auto first = id.find('/');
  const auto second = first == std::string::npos ? first : id.find('/', first + 1);
  if (second == std::string::npos || id.find('/', second + 1) != std::string::npos) {
    throw Error("malformed option id '" + id + "' (expected device/family/setting)");
  }
  CompilationOption opt;
  opt.device_id = id.substr(0, first);
  const std::string family = id.substr(first + 1, second - first - 1);
  const std::string setting = id.substr(second + 1);
  if (family == "A") {
    opt.family = CompilerFamily::A;
    const Setting levels[] = {Setting::O0, Setting::O1, Setting::O2, Setting::O3};
    for (Setting s : levels) {
      if (setting_name(s) == setting) {
        opt.setting = s;
        return opt;
      }
    }
  } else if (family == "B") {
    opt.family = CompilerFamily::B;
    if (setting == "line") {
      opt.setting = Setting::Line;
      return opt;
    }
    if (setting == "graph") {
      opt.setting = Setting::Graph;
      return opt;
    }
  }
  throw Error("unknown compiler family/setting in option id '" + id + "'");
}

std::vector<CompilationOption> enumerate_options(std::span<const DeviceModel> devices) {
  if (devices.empty()) {
    throw Error("option enumeration needs at least one device");
  }
  std::vector<CompilationOption> out;
  for (const auto& d : devices) {
    for (Setting s : {Setting::O0, Setting::O1, Setting::O2, Setting::O3}) {
      out.push_back({d.id, CompilerFamily::A, s});
    }
    for (Setting s : {Setting::Line, Setting::Graph}) {
      out.push_back({d.id, CompilerFamily::B, s});
    }
  }
  return out;
}

bool CompiledResult::same_output(const CompiledResult& o) const {
  return circuit == o.circuit && initial_layout == o.initial_layout &&
         final_layout == o.final_layout && option == o.option &&
         stats.swaps == o.stats.swaps &&
         stats.native_gate_count == o.stats.native_gate_count &&
         stats.placement_fallback == o.stats.placement_fallback;
}

Circuit unroll_three_qubit_gates(const Circuit& c) {
  Ops out;
  out.reserve(c.size());
  for (const auto& op : c.ops()) {
    if (op.is_gate() && op.qubits.size() == 3) {
      for (auto& x : expand(op)) {
        if (x.qubits.size() == 3) {
          for (auto& y : expand(x)) out.push_back(std::move(y));
        } else {
          out.push_back(std::move(x));
        }
      }
    } else {
      out.push_back(op);
    }
  }
  return c.with_ops(std::move(out));
}

Circuit decompose_to_native(const Circuit& c, const DeviceModel& d) {
  Ops out;
  out.reserve(c.size() * 2);
  for (const auto& op : c.ops()) {
    lower(op, d, out);
  }
  return c.with_ops(std::move(out));
}

RoutedCircuit route(const Circuit& c, const DeviceModel& d, const Layout& layout) {
  if (static_cast<int>(layout.size()) != c.num_qubits()) {
    throw Error("layout size does not match circuit width");
  }
  std::vector<Qubit> owner(static_cast<std::size_t>(d.num_qubits), -1);
  for (std::size_t l = 0; l < layout.size(); ++l) {
    const Qubit p = layout[l];
    if (p < 0 || p >= d.num_qubits || owner[p] >= 0) {
      throw Error("layout is not injective into " + d.id);
    }
    owner[p] = static_cast<Qubit>(l);
  }
  const auto dist = coupling_distances(d);

  RoutedCircuit r;
  r.initial_layout = layout;
  Layout current = layout;
  r.circuit = Circuit(d.num_qubits, c.num_clbits(), c.name());
  auto swap_physical = [&](Qubit p, Qubit q) {
    r.circuit.append(g(GateKind::Swap, {p, q}));
    ++r.swaps;
    std::swap(owner[p], owner[q]);
    if (owner[p] >= 0) current[owner[p]] = p;
    if (owner[q] >= 0) current[owner[q]] = q;
  };

  for (const auto& op : c.ops()) {
    if (op.is_gate() && op.qubits.size() > 2) {
      throw Error("route expects at most two-qubit gates; unroll first");
    }
    if (op.is_gate() && op.qubits.size() == 2) {
      Qubit pa = current[op.qubits[0]];
      const Qubit pb = current[op.qubits[1]];
      if (dist[pa][pb] < 0) {
        throw Error(d.id + ": qubits " + std::to_string(pa) + " and " +
                    std::to_string(pb) + " are disconnected");
      }
      while (dist[pa][pb] > 1) {
        Qubit step = -1;
        for (Qubit nb : d.neighbors(pa)) {
          if (dist[nb][pb] == dist[pa][pb] - 1) {
            step = nb;
            break;
          }
        }
        swap_physical(pa, step);
        pa = step;
      }
    }
    Instruction mapped = op;
    for (Qubit& q : mapped.qubits) {
      q = current[q];
    }
    r.circuit.append(std::move(mapped));
  }
  r.final_layout = current;
  return r;
}

bool is_device_legal(const Circuit& c, const DeviceModel& d) {
  if (c.num_qubits() > d.num_qubits) {
    return false;
  }
  for (const auto& op : c.ops()) {
    if (op.kind == GateKind::Barrier) continue;
    if (!d.is_native(op.kind)) {
      return false;
    }
    if (op.qubits.size() == 2) {
      const Qubit a = op.qubits[0], b = op.qubits[1];
      const bool ok = d.has_edge(a, b) || (symmetric_two_qubit(op.kind) && d.has_edge(b, a));
      if (!ok) return false;
    }
  }
  return true;
}

CompiledResult compile(const Circuit& c, const CompilationOption& opt,
                       std::span<const DeviceModel> devices) {
  const auto start = std::chrono::steady_clock::now();
  const DeviceModel& d = find_device(devices, opt.device_id);
  if (c.num_qubits() > d.num_qubits) {
    throw InfeasibleError(std::to_string(c.num_qubits()) + "-qubit circuit does not fit " +
                          d.id + " (" + std::to_string(d.num_qubits) + " qubits)");
  }
  Ops kept;
  for (const auto& op : c.ops()) {
    if (op.kind != GateKind::Barrier) kept.push_back(op);
  }
  const Circuit work = unroll_three_qubit_gates(c.with_ops(std::move(kept)));

  CompiledResult result;
  result.option = opt;
  Layout layout;
  switch (opt.setting) {
    case Setting::Line: {
      auto placed = place_line(work, d);
      layout = std::move(placed.layout);
      result.stats.placement_fallback = placed.fallback;
      break;
    }
    case Setting::Graph:
      layout = place_graph(work, d);
      break;
    default:
      layout = place_trivial(work, d);
  }
  RoutedCircuit routed = route(work, d, layout);
  const Circuit native = decompose_to_native(routed.circuit, d);
  OptLevel level = OptLevel::O1;
  if (opt.family == CompilerFamily::A) {
    level = static_cast<OptLevel>(static_cast<int>(opt.setting));
  }
  result.circuit = optimize(native, level);
  result.circuit.set_name(c.name());
  result.initial_layout = std::move(routed.initial_layout);
  result.final_layout = std::move(routed.final_layout);
  result.stats.swaps = routed.swaps;
  result.stats.native_gate_count = result.circuit.gate_count();
  result.stats.compile_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace qpredict
