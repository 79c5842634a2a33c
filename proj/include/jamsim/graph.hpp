#pragma once

#include <algorithm>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jamsim/errors.hpp"

namespace jamsim {

/// Undirected connected agent topology. Immutable after construction, so it
/// is safe to share across concurrent Monte Carlo runs.
class Graph {
 public:
  static Graph build(int n, const std::vector<std::pair<int, int>>& edges);

  int size() const { return n_; }

  int degree(int i) const {
    check_node(i);
    return static_cast<int>(adj_[i].size());
  }

  const std::vector<int>& neighbors(int i) const {
    check_node(i);
    return adj_[i];
  }

  /// Normalized edge list: (a,b) with a < b, sorted.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// L = D - A, integer arithmetic. Symmetric, rows sum to zero.
  std::vector<std::vector<int>> laplacian() const {
    std::vector<std::vector<int>> lap(n_, std::vector<int>(n_, 0));
    for (int i = 0; i < n_; ++i) lap[i][i] = static_cast<int>(adj_[i].size());
    for (const auto& [a, b] : edges_) {
      lap[a][b] = -1;
      lap[b][a] = -1;
    }
    return lap;
  }

 private:
  Graph(int n, std::vector<std::pair<int, int>> edges, std::vector<std::vector<int>> adj)
      : n_(n), edges_(std::move(edges)), adj_(std::move(adj)) {}

  void check_node(int i) const {
    if (i < 0 || i >= n_)
      throw Error(Errc::index_out_of_range, "node " + std::to_string(i) + " out of range");
  }

  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

inline Graph Graph::build(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 2) throw Error(Errc::domain_error, "graph needs at least 2 nodes");
  std::vector<std::vector<int>> adj(n);
  std::set<std::pair<int, int>> seen;
  std::vector<std::pair<int, int>> norm;
  norm.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw Error(Errc::index_out_of_range, "edge (" + std::to_string(a) + "," +
                                                std::to_string(b) + ") out of range");
    if (a == b) throw Error(Errc::self_loop, "self loop at node " + std::to_string(a));
    auto e = std::minmax(a, b);
    if (!seen.insert(e).second)
      throw Error(Errc::duplicate_edge,
                  "duplicate edge (" + std::to_string(e.first) + "," + std::to_string(e.second) + ")");
    norm.push_back(e);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  // Breadth-first connectivity check; fail fast, the consensus guarantees
  // assume a connected topology.
  std::vector<char> visited(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  visited[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (int w : adj[v]) {
      if (!visited[w]) {
        visited[w] = 1;
        ++reached;
        frontier.push(w);
      }
    }
  }
  if (reached != n)
    throw Error(Errc::disconnected, "graph is disconnected (" + std::to_string(reached) + " of " +
                                        std::to_string(n) + " nodes reachable)");
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  std::sort(norm.begin(), norm.end());
  return Graph(n, std::move(norm), std::move(adj));
}

inline Graph build_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  return Graph::build(n, edges);
}

}  // namespace jamsim
