// SPDX-License-Identifier: MIT

#pragma once

#include "qpredict/circuit.hpp"

#include <map>
#include <utility>
#include <vector>

namespace qpredict {

/// ASAP layering of a circuit. Every instruction (measure and barrier
/// included) occupies one layer on each of its qubits.
struct DepthSchedule {
  std::vector<int> layer_of;  ///< 1-based layer per instruction index
  int depth = 0;
};

DepthSchedule circuit_depth(const Circuit& c);

/// Undirected qubit interaction graph of the multi-qubit gates.
struct InteractionGraph {
  int num_nodes = 0;
  /// Edge {a, b} with a < b mapped to the number of gates acting on both.
  std::map<std::pair<Qubit, Qubit>, int> multiplicity;

  int degree(Qubit q) const;
  bool has_edge(Qubit a, Qubit b) const;
  std::size_t num_edges() const { return multiplicity.size(); }
};

InteractionGraph interaction_graph(const Circuit& c);

/// For each instruction, whether it lies on at least one longest path of
/// the dependency DAG (path length counted in instructions).
std::vector<bool> on_longest_path(const Circuit& c);

}  // namespace qpredict
