// SPDX-License-Identifier: MIT

#include "qpredict/compiler.hpp"
#include "qpredict/dag.hpp"
#include "qpredict/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

namespace qpredict {

namespace {

void check_width(const Circuit& c, const DeviceModel& d) {
  if (c.num_qubits() > d.num_qubits) {
    throw InfeasibleError(std::to_string(c.num_qubits()) + "-qubit circuit does not fit " +
                          d.id + " (" + std::to_string(d.num_qubits) + " qubits)");
  }
}

// Greedy simple path from `start`: always step to the unvisited neighbour
// with the fewest unvisited neighbours of its own, lowest id on ties.
std::vector<Qubit> greedy_path(const DeviceModel& d, Qubit start, std::size_t want) {
  std::vector<bool> visited(static_cast<std::size_t>(d.num_qubits), false);
  std::vector<Qubit> path{start};
  visited[start] = true;
  while (path.size() < want) {
    Qubit best = -1;
    int best_free = std::numeric_limits<int>::max();
    for (Qubit nb : d.neighbors(path.back())) {
      if (visited[nb]) continue;
      int free = 0;
      for (Qubit nn : d.neighbors(nb)) {
        free += visited[nn] ? 0 : 1;
      }
      if (free < best_free) {
        best = nb;
        best_free = free;
      }
    }
    if (best < 0) break;
    visited[best] = true;
    path.push_back(best);
  }
  return path;
}

std::vector<int> bfs_distances(const DeviceModel& d, Qubit from) {
  std::vector<int> dist(static_cast<std::size_t>(d.num_qubits), -1);
  std::queue<Qubit> todo;
  dist[from] = 0;
  todo.push(from);
  while (!todo.empty()) {
    const Qubit q = todo.front();
    todo.pop();
    for (Qubit nb : d.neighbors(q)) {
      if (dist[nb] < 0) {
        dist[nb] = dist[q] + 1;
        todo.push(nb);
      }
    }
  }
  return dist;
}

}  // namespace

Layout place_trivial(const Circuit& c, const DeviceModel& d) {
  check_width(c, d);
  Layout layout(static_cast<std::size_t>(c.num_qubits()));
  std::iota(layout.begin(), layout.end(), 0);
  return layout;
}

LinePlacement place_line(const Circuit& c, const DeviceModel& d) {
  check_width(c, d);
  const auto n = static_cast<std::size_t>(c.num_qubits());
  if (n == 0) {
    return {};
  }
  std::vector<Qubit> path;
  for (Qubit s = 0; s < d.num_qubits && path.size() < n; ++s) {
    auto candidate = greedy_path(d, s, n);
    if (candidate.size() >= n) {
      path = std::move(candidate);
    }
  }
  if (path.size() < n) {
    return {place_trivial(c, d), true};
  }
  const InteractionGraph ig = interaction_graph(c);
  std::vector<int> degree(n);
  for (std::size_t q = 0; q < n; ++q) {
    degree[q] = ig.degree(static_cast<Qubit>(q));
  }
  std::vector<Qubit> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Qubit a, Qubit b) { return degree[a] > degree[b]; });
  LinePlacement result;
  result.layout.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    result.layout[order[i]] = path[i];
  }
  return result;
}

Layout place_graph(const Circuit& c, const DeviceModel& d) {
  check_width(c, d);
  const auto n = static_cast<std::size_t>(c.num_qubits());
  const InteractionGraph ig = interaction_graph(c);
  Layout layout(n, -1);
  std::vector<bool> used(static_cast<std::size_t>(d.num_qubits), false);

  auto free_degree = [&](Qubit p) {
    int k = 0;
    for (Qubit nb : d.neighbors(p)) k += used[nb] ? 0 : 1;
    return k;
  };
  // Free neighbour of `p` with the most free neighbours, lowest id on ties.
  auto best_free_neighbor = [&](Qubit p) {
    Qubit best = -1;
    int best_deg = -1;
    for (Qubit nb : d.neighbors(p)) {
      if (used[nb]) continue;
      const int deg = free_degree(nb);
      if (deg > best_deg) {
        best = nb;
        best_deg = deg;
      }
    }
    return best;
  };
  auto put = [&](Qubit logical, Qubit physical) {
    layout[logical] = physical;
    used[physical] = true;
  };

  std::vector<std::pair<Qubit, Qubit>> edges;
  for (const auto& [edge, count] : ig.multiplicity) {
    edges.push_back(edge);
  }
  std::stable_sort(edges.begin(), edges.end(), [&](const auto& x, const auto& y) {
    return ig.multiplicity.at(x) > ig.multiplicity.at(y);
  });

  for (const auto& [a, b] : edges) {
    const bool pa = layout[a] >= 0;
    const bool pb = layout[b] >= 0;
    if (pa && pb) continue;
    if (pa || pb) {
      const Qubit anchor = pa ? layout[a] : layout[b];
      const Qubit nb = best_free_neighbor(anchor);
      if (nb >= 0) put(pa ? b : a, nb);
      continue;
    }
    // Seed a new component at the free qubit with the most free neighbours.
    Qubit seed = -1;
    int seed_deg = 0;
    for (Qubit p = 0; p < d.num_qubits; ++p) {
      if (used[p]) continue;
      const int deg = free_degree(p);
      if (deg > seed_deg) {
        seed = p;
        seed_deg = deg;
      }
    }
    if (seed < 0) continue;
    const Qubit hub = ig.degree(a) >= ig.degree(b) ? a : b;
    const Qubit leaf = hub == a ? b : a;
    put(hub, seed);
    put(leaf, best_free_neighbor(seed));
  }

  // Leftovers go to the free qubit nearest to an already placed
  // interaction partner (or to any placed qubit).
  for (Qubit q = 0; q < static_cast<Qubit>(n); ++q) {
    if (layout[q] >= 0) continue;
    Qubit anchor = -1;
    for (const auto& [edge, count] : ig.multiplicity) {
      const Qubit other = edge.first == q ? edge.second : edge.second == q ? edge.first : -1;
      if (other >= 0 && layout[other] >= 0) {
        anchor = layout[other];
        break;
      }
    }
    if (anchor < 0) {
      for (Qubit p : layout) {
        if (p >= 0) {
          anchor = p;
          break;
        }
      }
    }
    Qubit target = -1;
    if (anchor >= 0) {
      const auto dist = bfs_distances(d, anchor);
      int best = std::numeric_limits<int>::max();
      for (Qubit p = 0; p < d.num_qubits; ++p) {
        if (!used[p] && dist[p] >= 0 && dist[p] < best) {
          best = dist[p];
          target = p;
        }
      }
    }
    if (target < 0) {
      for (Qubit p = 0; p < d.num_qubits; ++p) {
        if (!used[p]) {
          target = p;
          break;
        }
      }
    }
    put(q, target);
  }
  return layout;
}

std::vector<std::vector<int>> coupling_distances(const DeviceModel& d) {
  std::vector<std::vector<int>> dist;
  dist.reserve(static_cast<std::size_t>(d.num_qubits));
  for (Qubit q = 0; q < d.num_qubits; ++q) {
    dist.push_back(bfs_distances(d, q));
  }
  return dist;
}

}  // namespace qpredict
