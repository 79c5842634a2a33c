#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "jamsim/graph.hpp"
#include "jamsim/schedule.hpp"

using jamsim::CommSchedule;
using jamsim::draw_schedule;
using jamsim::Graph;
using jamsim::ProtocolParams;
using jamsim::validate_params;

namespace {

Graph star4() { return Graph::build(4, {{0, 1}, {0, 2}, {0, 3}}); }

ProtocolParams uniform_params(int n, double delta, double hold, double eps) {
  return ProtocolParams{std::vector<double>(n, delta), std::vector<double>(n, hold), eps};
}

}  // namespace

TEST_CASE("hold-time bound accepts the desk parameters") {
  // Degree-3 hub, eps/(2d) = 0.02/6 > delta: the slot length binds.
  auto p = uniform_params(4, 0.001, 0.001 / 1.01, 0.02);
  CHECK_FALSE(validate_params(p, star4()).has_value());
}

TEST_CASE("hold time equal to the slot length is rejected") {
  auto p = uniform_params(4, 0.001, 0.001, 0.02);
  auto v = validate_params(p, star4());
  REQUIRE(v.has_value());
  CHECK(v->agent == 0);
  CHECK(v->bound == Catch::Approx(0.001));
}

TEST_CASE("hold time above eps/(2d) is rejected") {
  // Hub degree 3: eps/(2d) = 0.02/6 < 0.004.
  auto p = uniform_params(4, 0.01, 0.004, 0.02);
  auto v = validate_params(p, star4());
  REQUIRE(v.has_value());
  CHECK(v->agent == 0);
  CHECK(v->bound == Catch::Approx(0.02 / 6.0));
}

TEST_CASE("attempts stay inside their half-open slots") {
  Graph g = star4();
  auto p = uniform_params(4, 1.0, 0.5, 10.0);
  CommSchedule s = draw_schedule(p, g, 50.0, 99);
  for (int i = 0; i < 4; ++i) {
    REQUIRE(s.attempt_times[i].size() >= 50);
    for (std::size_t k = 0; k < s.attempt_times[i].size(); ++k) {
      const double t = s.attempt_times[i][k];
      CHECK(t >= static_cast<double>(k) * 1.0);
      CHECK(t < static_cast<double>(k + 1) * 1.0);
    }
  }
}

TEST_CASE("equal seeds reproduce the schedule bit for bit") {
  Graph g = star4();
  auto p = uniform_params(4, 0.25, 0.1, 1.0);
  CommSchedule a = draw_schedule(p, g, 20.0, 1234);
  CommSchedule b = draw_schedule(p, g, 20.0, 1234);
  CHECK(a.attempt_times == b.attempt_times);
  CommSchedule c = draw_schedule(p, g, 20.0, 1235);
  CHECK(a.attempt_times != c.attempt_times);
}

TEST_CASE("draws are keyed per agent: extending the graph changes nothing") {
  Graph g2 = Graph::build(2, {{0, 1}});
  Graph g3 = Graph::build(3, {{0, 1}, {1, 2}});
  auto p2 = uniform_params(2, 0.5, 0.2, 2.0);
  auto p3 = uniform_params(3, 0.5, 0.2, 2.0);
  CommSchedule a = draw_schedule(p2, g2, 10.0, 77);
  CommSchedule b = draw_schedule(p3, g3, 10.0, 77);
  CHECK(a.attempt_times[0] == b.attempt_times[0]);
  CHECK(a.attempt_times[1] == b.attempt_times[1]);
}

TEST_CASE("slot-0 draws look uniform") {
  // 1e5 fresh slot-0 draws via distinct seeds; fixed-seed statistical oracle.
  const int trials = 100000;
  std::vector<double> u;
  u.reserve(trials);
  Graph g = Graph::build(2, {{0, 1}});
  auto p = uniform_params(2, 1.0, 0.4, 10.0);
  for (int trial = 0; trial < trials; ++trial) {
    CommSchedule s = draw_schedule(p, g, 1.0, 50000 + static_cast<std::uint64_t>(trial));
    u.push_back(s.attempt_times[0][0]);
  }
  double mean = 0.0;
  for (double v : u) mean += v;
  mean /= trials;
  CHECK(mean == Catch::Approx(0.5).margin(0.01));

  // Kolmogorov-Smirnov against uniform(0,1) at the 1% level.
  std::sort(u.begin(), u.end());
  double d = 0.0;
  for (int i = 0; i < trials; ++i) {
    d = std::max(d, std::abs((i + 1.0) / trials - u[i]));
    d = std::max(d, std::abs(u[i] - static_cast<double>(i) / trials));
  }
  CHECK(d < 1.628 / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("mean spacing between consecutive attempts approaches delta") {
  Graph g = Graph::build(2, {{0, 1}});
  const double delta = 0.75;
  auto p = uniform_params(2, delta, 0.25, 10.0);
  CommSchedule s = draw_schedule(p, g, 4000.0, 4242);
  const auto& t = s.attempt_times[0];
  double mean_gap = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  CHECK(mean_gap == Catch::Approx(delta).margin(0.01));

  // Hold < delta ensures t_k + hold < t_{k+2} for every k.
  for (std::size_t k = 0; k + 2 < t.size(); ++k) CHECK(t[k] + p.hold[0] < t[k + 2]);
}
