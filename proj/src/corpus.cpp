// SPDX-License-Identifier: MIT

#include "qpredict/corpus.hpp"

#include "qpredict/errors.hpp"
#include "qpredict/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace qpredict {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t family_key(const std::string& family) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : family) {
    h = (h ^ ch) * 1099511628211ULL;
  }
  return h;
}

CounterRng instance_rng(const std::string& family, int n, int variant, std::uint64_t seed) {
  return CounterRng(seed)
      .derive(family_key(family))
      .derive(static_cast<std::uint64_t>(n))
      .derive(static_cast<std::uint64_t>(variant));
}

std::string instance_name(const std::string& family, int n, int variant) {
  std::string name = family + "_n" + std::to_string(n);
  if (family == "random" || family == "qaoa") name += "_v" + std::to_string(variant);
  return name;
}

Circuit ghz(int n) {
  Circuit c(n, n);
  c.gate(GateKind::H, {0});
  for (int i = 0; i + 1 < n; ++i) c.gate(GateKind::CX, {i, i + 1});
  return c.measure_all();
}

Circuit wstate(int n) {
  Circuit c(n, n);
  c.gate(GateKind::X, {0});
  for (int i = 0; i + 1 < n; ++i) {
    const double theta = 2.0 * std::acos(std::sqrt(1.0 / static_cast<double>(n - i)));
    c.gate(GateKind::CRY, {i, i + 1}, {theta});
    c.gate(GateKind::CX, {i + 1, i});
  }
  return c.measure_all();
}

// n-1 input qubits and one ancilla; balanced oracle f(x) = b.x xor parity.
Circuit deutsch_jozsa(int n, CounterRng& rng) {
  const int inputs = n - 1;
  Circuit c(n, inputs);
  std::vector<bool> b(static_cast<std::size_t>(inputs));
  for (int i = 0; i < inputs; ++i) b[i] = rng.below(2) == 1;
  c.gate(GateKind::X, {inputs});
  for (int i = 0; i < n; ++i) c.gate(GateKind::H, {i});
  for (int i = 0; i < inputs; ++i) {
    if (b[i]) c.gate(GateKind::X, {i});
  }
  for (int i = 0; i < inputs; ++i) c.gate(GateKind::CX, {i, inputs});
  for (int i = 0; i < inputs; ++i) {
    if (b[i]) c.gate(GateKind::X, {i});
  }
  for (int i = 0; i < inputs; ++i) c.gate(GateKind::H, {i});
  for (int i = 0; i < inputs; ++i) c.measure(i, i);
  return c;
}

Circuit qft(int n) {
  Circuit c(n, n);
  for (int i = n - 1; i >= 0; --i) {
    c.gate(GateKind::H, {i});
    for (int j = i - 1; j >= 0; --j) {
      c.gate(GateKind::CP, {j, i}, {kPi / std::pow(2.0, i - j)});
    }
  }
  for (int i = 0; i < n / 2; ++i) c.gate(GateKind::Swap, {i, n - 1 - i});
  return c.measure_all();
}

// Z on `target` controlled by all of `controls`, through ccx ancillas.
void multi_controlled_z(Circuit& c, const std::vector<Qubit>& controls, Qubit target,
                        const std::vector<Qubit>& ancillas) {
  if (controls.size() == 1) {
    c.gate(GateKind::CZ, {controls[0], target});
    return;
  }
  if (ancillas.empty()) {
    c.gate(GateKind::H, {target});
    c.gate(GateKind::CCX, {controls[0], controls[1], target});
    c.gate(GateKind::H, {target});
    return;
  }
  std::vector<Instruction> chain;
  chain.push_back(make_gate(GateKind::CCX, {controls[0], controls[1], ancillas[0]}));
  for (std::size_t i = 2; i < controls.size(); ++i) {
    chain.push_back(make_gate(GateKind::CCX, {controls[i], ancillas[i - 2], ancillas[i - 1]}));
  }
  for (const auto& op : chain) c.append(op);
  c.gate(GateKind::CZ, {ancillas[controls.size() - 2], target});
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) c.append(*it);
}

Circuit grover(int n, CounterRng& rng) {
  const int m = n <= 3 ? n : (n + 2) / 2;
  Circuit c(n, m);
  std::vector<Qubit> controls;
  for (int i = 0; i + 1 < m; ++i) controls.push_back(i);
  std::vector<Qubit> ancillas;
  for (int i = m; i < n; ++i) ancillas.push_back(i);
  const Qubit target = m - 1;
  std::vector<bool> marked(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) marked[i] = rng.below(2) == 1;
  const int iterations =
      std::max(1, static_cast<int>(std::floor(kPi / 4.0 * std::sqrt(std::pow(2.0, m)))));

  for (int i = 0; i < m; ++i) c.gate(GateKind::H, {i});
  for (int it = 0; it < iterations; ++it) {
    for (int i = 0; i < m; ++i) {
      if (!marked[i]) c.gate(GateKind::X, {i});
    }
    multi_controlled_z(c, controls, target, ancillas);
    for (int i = 0; i < m; ++i) {
      if (!marked[i]) c.gate(GateKind::X, {i});
    }
    for (int i = 0; i < m; ++i) c.gate(GateKind::H, {i});
    for (int i = 0; i < m; ++i) c.gate(GateKind::X, {i});
    multi_controlled_z(c, controls, target, ancillas);
    for (int i = 0; i < m; ++i) c.gate(GateKind::X, {i});
    for (int i = 0; i < m; ++i) c.gate(GateKind::H, {i});
  }
  for (int i = 0; i < m; ++i) c.measure(i, i);
  return c;
}

// Variant 0: ring. 1: ring plus a random perfect matching. 2: random
// graph of expected degree 4 with two QAOA layers.
Circuit qaoa(int n, int variant, CounterRng& rng) {
  std::set<std::pair<int, int>> edges;
  auto add = [&](int a, int b) {
    if (a != b) edges.insert({std::min(a, b), std::max(a, b)});
  };
  const int shape = variant % 3;
  if (shape == 0 || shape == 1) {
    for (int i = 0; i + 1 < n; ++i) add(i, i + 1);
    if (n > 2) add(n - 1, 0);
  }
  if (shape == 1) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);
    for (int i = 0; i + 1 < n; i += 2) add(perm[i], perm[i + 1]);
  }
  if (shape == 2) {
    const double p = std::min(1.0, 4.0 / static_cast<double>(n - 1));
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (rng.uniform() < p) add(a, b);
      }
    }
    if (edges.empty()) add(0, 1);
  }
  const int layers = shape == 2 ? 2 : 1;
  Circuit c(n, n);
  for (int i = 0; i < n; ++i) c.gate(GateKind::H, {i});
  for (int l = 0; l < layers; ++l) {
    const double gamma = (0.1 + rng.uniform()) * kPi / 2;
    const double beta = (0.1 + rng.uniform()) * kPi / 4;
    for (const auto& [a, b] : edges) c.gate(GateKind::RZZ, {a, b}, {gamma});
    for (int i = 0; i < n; ++i) c.gate(GateKind::RX, {i}, {beta});
  }
  return c.measure_all();
}

// Layered random circuit. Each variant draws its own layer count, share
// of two-qubit gates and interaction range.
Circuit random_circuit(int n, int variant, CounterRng& rng) {
  static const GateKind one_q[] = {GateKind::H,  GateKind::X,   GateKind::Y,   GateKind::Z,
                                   GateKind::S,  GateKind::Sdg, GateKind::T,   GateKind::Tdg,
                                   GateKind::SX, GateKind::RX,  GateKind::RY,  GateKind::RZ,
                                   GateKind::U3, GateKind::P,   GateKind::SXdg};
  static const GateKind two_q[] = {GateKind::CX,  GateKind::CX,  GateKind::CZ,  GateKind::CP,
                                   GateKind::RZZ, GateKind::Swap, GateKind::CRZ, GateKind::CY,
                                   GateKind::RXX, GateKind::CH};
  const int layers = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(2 * n, 16))));
  const double p_two = 0.1 + 0.7 * rng.uniform();
  const int reach = rng.below(2) == 0 ? 2 : n;
  const bool use_ccx = n >= 3 && rng.below(4) == 0;
  Circuit c(n, n);
  auto params = [&](GateKind k) {
    std::vector<double> p;
    for (int i = 0; i < gate_info(k).num_params; ++i) p.push_back((2 * rng.uniform() - 1) * kPi);
    return p;
  };
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int l = 0; l < layers; ++l) {
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<bool> busy(static_cast<std::size_t>(n), false);
    for (int q : order) {
      if (busy[q]) continue;
      busy[q] = true;
      if (rng.uniform() < p_two) {
        std::vector<int> partners;
        for (int d = 1; d <= reach; ++d) {
          for (int r : {q - d, q + d}) {
            if (r >= 0 && r < n && !busy[r] &&
                std::find(partners.begin(), partners.end(), r) == partners.end()) {
              partners.push_back(r);
            }
          }
        }
        if (!partners.empty()) {
          const int r = partners[rng.below(partners.size())];
          busy[r] = true;
          if (use_ccx && rng.below(5) == 0) {
            bool placed = false;
            for (int t = 0; t < n && !placed; ++t) {
              if (!busy[t]) {
                busy[t] = true;
                c.gate(GateKind::CCX, {q, r, t});
                placed = true;
              }
            }
            if (placed) continue;
          }
          const GateKind k = two_q[rng.below(std::size(two_q))];
          c.gate(k, {q, r}, params(k));
          continue;
        }
      }
      const GateKind k = one_q[rng.below(std::size(one_q))];
      c.gate(k, {q}, params(k));
    }
  }
  if (variant % 2 == 0) c.measure_all();
  return c;
}

}  // namespace

const std::vector<std::string>& corpus_families() {
  static const std::vector<std::string> names{"ghz",    "wstate", "dj",    "qft",
                                              "grover", "qaoa",   "random"};
  return names;
}

bool family_supports(const std::string& family, int n) {
  if (std::find(corpus_families().begin(), corpus_families().end(), family) ==
      corpus_families().end()) {
    throw Error("unknown circuit family '" + family + "'");
  }
  if (n < 2) return false;
  if (family == "grover") return n == 2 || n == 3 || (n % 2 == 0 && n <= 14);
  return true;
}

int family_variants(const std::string& family, const CorpusSpec& spec) {
  if (family == "random") return spec.random_variants;
  if (family == "qaoa") return spec.qaoa_variants;
  return 1;
}

Circuit generate_circuit(const std::string& family, int n, int variant, std::uint64_t seed) {
  if (!family_supports(family, n)) {
    throw Error("family '" + family + "' has no " + std::to_string(n) + "-qubit instance");
  }
  CounterRng rng = instance_rng(family, n, variant, seed);
  Circuit c;
  if (family == "ghz") c = ghz(n);
  else if (family == "wstate") c = wstate(n);
  else if (family == "dj") c = deutsch_jozsa(n, rng);
  else if (family == "qft") c = qft(n);
  else if (family == "grover") c = grover(n, rng);
  else if (family == "qaoa") c = qaoa(n, variant, rng);
  else c = random_circuit(n, variant, rng);
  c.set_name(instance_name(family, n, variant));
  return c;
}

std::vector<Circuit> generate_corpus(const CorpusSpec& spec) {
  if (spec.min_qubits < 2 || spec.max_qubits > 130 || spec.min_qubits > spec.max_qubits) {
    throw Error("qubit range must lie within 2..130");
  }
  std::vector<Circuit> out;
  for (const auto& family : spec.families) {
    const int variants = family_variants(family, spec);
    for (int n = spec.min_qubits; n <= spec.max_qubits; ++n) {
      if (!family_supports(family, n)) continue;
      for (int v = 0; v < variants; ++v) {
        out.push_back(generate_circuit(family, n, v, spec.seed));
      }
    }
  }
  return out;
}

}  // namespace qpredict
