// SPDX-License-Identifier: MIT

#include "qpredict/dag.hpp"

#include <algorithm>

namespace qpredict {

DepthSchedule circuit_depth(const Circuit& c) {
  DepthSchedule sched;
  sched.layer_of.reserve(c.size());
  std::vector<int> frontier(static_cast<std::size_t>(c.num_qubits()), 0);
  for (const auto& op : c.ops()) {
    int layer = 0;
    for (Qubit q : op.qubits) {
      layer = std::max(layer, frontier[q]);
    }
    ++layer;
    for (Qubit q : op.qubits) {
      frontier[q] = layer;
    }
    sched.layer_of.push_back(layer);
    sched.depth = std::max(sched.depth, layer);
  }
  return sched;
}

int InteractionGraph::degree(Qubit q) const {
  int d = 0;
  for (const auto& [edge, count] : multiplicity) {
    if (edge.first == q || edge.second == q) {
      ++d;
    }
  }
  return d;
}

bool InteractionGraph::has_edge(Qubit a, Qubit b) const {
  return multiplicity.count({std::min(a, b), std::max(a, b)}) > 0;
}

InteractionGraph interaction_graph(const Circuit& c) {
  InteractionGraph g;
  g.num_nodes = c.num_qubits();
  for (const auto& op : c.ops()) {
    if (!op.is_multi_qubit_gate()) {
      continue;
    }
    for (std::size_t i = 0; i < op.qubits.size(); ++i) {
      for (std::size_t j = i + 1; j < op.qubits.size(); ++j) {
        const Qubit a = std::min(op.qubits[i], op.qubits[j]);
        const Qubit b = std::max(op.qubits[i], op.qubits[j]);
        ++g.multiplicity[{a, b}];
      }
    }
  }
  return g;
}

std::vector<bool> on_longest_path(const Circuit& c) {
  const auto& ops = c.ops();
  const std::size_t n = ops.size();
  const auto nq = static_cast<std::size_t>(c.num_qubits());
  // Longest path ending at / starting from each node, in node counts.
  std::vector<int> to(n, 1);
  std::vector<int> from(n, 1);
  std::vector<long> last(nq, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (Qubit q : ops[i].qubits) {
      if (last[q] >= 0) {
        to[i] = std::max(to[i], to[last[q]] + 1);
      }
      last[q] = static_cast<long>(i);
    }
  }
  std::fill(last.begin(), last.end(), -1);
  for (std::size_t k = n; k-- > 0;) {
    for (Qubit q : ops[k].qubits) {
      if (last[q] >= 0) {
        from[k] = std::max(from[k], from[last[q]] + 1);
      }
      last[q] = static_cast<long>(k);
    }
  }
  const int longest = n ? *std::max_element(to.begin(), to.end()) : 0;
  std::vector<bool> result(n);
  for (std::size_t i = 0; i < n; ++i) {
    result[i] = to[i] + from[i] - 1 == longest;
  }
  return result;
}

}  // namespace qpredict
