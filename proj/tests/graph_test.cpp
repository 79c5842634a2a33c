#include <catch2/catch_amalgamated.hpp>

#include <queue>
#include <vector>

#include "jamsim/graph.hpp"
#include "jamsim/rng.hpp"

using jamsim::Errc;
using jamsim::Error;
using jamsim::Graph;

namespace {

// Independent reachability oracle for the connectivity check.
bool bfs_connected(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int cnt = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++cnt;
        q.push(w);
      }
  }
  return cnt == n;
}

Graph random_connected_graph(std::uint64_t seed, int n) {
  // Random spanning tree plus a few extra edges.
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    int parent = static_cast<int>(jamsim::uniform_draw(seed, jamsim::Stream::attack_shape, v, 0) * v);
    edges.emplace_back(parent, v);
  }
  for (int extra = 0; extra < n / 2; ++extra) {
    int a = static_cast<int>(jamsim::uniform_draw(seed, jamsim::Stream::attack_shape, 1000 + extra, 0) * n);
    int b = static_cast<int>(jamsim::uniform_draw(seed, jamsim::Stream::attack_shape, 2000 + extra, 0) * n);
    if (a == b) continue;
    auto e = std::minmax(a, b);
    if (std::find(edges.begin(), edges.end(), std::make_pair(e.first, e.second)) == edges.end())
      edges.emplace_back(e.first, e.second);
  }
  return Graph::build(n, edges);
}

}  // namespace

TEST_CASE("two-node path is the smallest valid graph") {
  Graph g = Graph::build(2, {{0, 1}});
  CHECK(g.size() == 2);
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 1);
}

TEST_CASE("construction rejects bad inputs") {
  CHECK_THROWS_MATCHES(Graph::build(3, {{0, 1}}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::disconnected; }));
  CHECK_THROWS_MATCHES(Graph::build(2, {{0, 0}, {0, 1}}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::self_loop; }));
  CHECK_THROWS_MATCHES(Graph::build(2, {{0, 1}, {1, 0}}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::duplicate_edge; }));
  CHECK_THROWS_MATCHES(Graph::build(2, {{0, 2}}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::index_out_of_range; }));
  CHECK_THROWS(Graph::build(1, {}));
}

TEST_CASE("degree") {
  Graph star = Graph::build(4, {{0, 1}, {0, 2}, {0, 3}});
  CHECK(star.degree(0) == 3);
  CHECK(star.degree(1) == 1);

  Graph k4 = Graph::build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  for (int i = 0; i < 4; ++i) CHECK(k4.degree(i) == 3);

  CHECK_THROWS_MATCHES(star.degree(4), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::index_out_of_range; }));
}

TEST_CASE("laplacian of small graphs") {
  Graph path = Graph::build(2, {{0, 1}});
  auto lap = path.laplacian();
  CHECK(lap == std::vector<std::vector<int>>{{1, -1}, {-1, 1}});

  Graph tri = Graph::build(3, {{0, 1}, {1, 2}, {0, 2}});
  lap = tri.laplacian();
  for (int i = 0; i < 3; ++i) {
    CHECK(lap[i][i] == 2);
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(lap[i][j] == -1);
  }
}

TEST_CASE("laplacian invariants on random graphs") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 3 + static_cast<int>(seed % 8);
    Graph g = random_connected_graph(seed, n);
    auto lap = g.laplacian();

    // Symmetry, zero row sums, diagonal equals degree.
    for (int i = 0; i < n; ++i) {
      int row = 0;
      for (int j = 0; j < n; ++j) {
        row += lap[i][j];
        CHECK(lap[i][j] == lap[j][i]);
      }
      CHECK(row == 0);
      CHECK(lap[i][i] == g.degree(i));
    }

    // Quadratic form against the edge-sum oracle.
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i)
      x[i] = jamsim::uniform_draw(seed, jamsim::Stream::initial_state, i, 7) * 4.0 - 2.0;
    double via_matrix = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) via_matrix += x[i] * lap[i][j] * x[j];
    double via_edges = 0.0;
    for (auto [a, b] : g.edges()) via_edges += (x[a] - x[b]) * (x[a] - x[b]);
    CHECK(via_matrix == Catch::Approx(via_edges).margin(1e-12));
    CHECK(via_edges >= 0.0);
  }
}

TEST_CASE("random graph factory agrees with the reachability oracle") {
  for (std::uint64_t seed = 30; seed < 50; ++seed) {
    const int n = 4 + static_cast<int>(seed % 6);
    Graph g = random_connected_graph(seed, n);
    CHECK(bfs_connected(g.size(), g.edges()));
  }
}
