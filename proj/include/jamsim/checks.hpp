#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "jamsim/analysis.hpp"
#include "jamsim/engine.hpp"
#include "jamsim/io.hpp"
#include "jamsim/oracles.hpp"

namespace jamsim {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Every successful attempt that read an offset at or beyond the deadband
/// must be followed by a full-magnitude input over [t, t + hold), checked
/// exactly on the stored breakpoints (window end truncated at the horizon).
inline CheckResult check_lemma1(const Trajectory& tr, const ProtocolParams& p) {
  std::size_t qualifying = 0, violations = 0;
  for (const auto& a : tr.attempts) {
    if (!a.success || std::abs(a.neighbor_offset) < p.epsilon) continue;
    ++qualifying;
    const double end = std::min(a.time + p.hold[a.agent], tr.horizon);
    std::size_t m = tr.segment_index(a.time);
    bool ok = true;
    while (m + 1 < tr.size() && tr.times[m] < end) {
      // Segment [times[m], times[m+1]) overlaps [a.time, end)?
      if (tr.times[m + 1] > a.time && std::abs(tr.input(m, a.agent)) != 1) ok = false;
      ++m;
    }
    if (m + 1 == tr.size() && tr.times[m] < end && std::abs(tr.input(m, a.agent)) != 1) ok = false;
    if (!ok) ++violations;
  }
  CheckResult r{"lemma1_hold", violations == 0,
                std::to_string(qualifying) + " qualifying attempts, " +
                    std::to_string(violations) + " violations"};
  return r;
}

inline CheckResult check_lyapunov_monotone(const Trajectory& tr, const Graph& g,
                                           double tol = 1e-9) {
  const auto trace = lyapunov_trace(tr, g);
  double worst = 0.0;
  for (std::size_t m = 1; m < trace.size(); ++m)
    worst = std::max(worst, trace[m].second - trace[m - 1].second);
  return CheckResult{"lyapunov_monotone", worst <= tol,
                     "max per-step increase " + format_double(worst)};
}

/// Bitwise affine evolution between breakpoints plus the unit speed bound
/// (1 ulp of slack on the magnitude comparison).
inline CheckResult check_speed_bound(const Trajectory& tr) {
  std::size_t bad = 0;
  for (std::size_t m = 1; m < tr.size(); ++m) {
    const double dt = tr.times[m] - tr.times[m - 1];
    for (int i = 0; i < tr.n; ++i) {
      const double expect = tr.state(m - 1, i) + tr.input(m - 1, i) * dt;
      if (expect != tr.state(m, i)) ++bad;
      const double step = std::abs(tr.state(m, i) - tr.state(m - 1, i));
      if (step > dt * (1.0 + 4e-16) + 1e-300) ++bad;
    }
  }
  return CheckResult{"speed_bound", bad == 0, std::to_string(bad) + " offending transitions"};
}

inline CheckResult check_settles(const Trajectory& tr, const Graph& g, double eps) {
  const auto ct = consensus_times(tr, g, eps);
  CheckResult r{"finite_settling", ct.settling.has_value(), ""};
  r.detail = ct.settling ? "settling at " + format_double(*ct.settling)
                         : "still outside the consensus set at the horizon";
  return r;
}

/// Realized attack history against its declared duration budget. For aware
/// runs this is the attacker's committed history, which must always pass.
inline CheckResult check_attack_budget(const Trajectory& tr, double tol = 1e-9) {
  const auto rep = check_assumption1(tr.attacks, tr.attacks.kappa(), tr.attacks.rho(), tr.horizon,
                                     tol);
  return CheckResult{"attack_duration_budget", rep.ok, rep.message()};
}

/// Integral consequence of the control law: over the whole run,
/// V(end) <= V(0) - alpha * |union of qualifying hold windows| with
/// alpha = min_i (eps - 2 d_i T_i).
inline CheckResult check_hold_decrease(const Trajectory& tr, const Graph& g,
                                       const ProtocolParams& p, double tol = 1e-9) {
  double alpha = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.size(); ++i)
    alpha = std::min(alpha, p.epsilon - 2.0 * g.degree(i) * p.hold[i]);
  std::vector<std::pair<double, double>> windows;
  for (const auto& a : tr.attempts)
    if (a.success && std::abs(a.neighbor_offset) >= p.epsilon)
      windows.emplace_back(a.time, std::min(a.time + p.hold[a.agent], tr.horizon));
  std::sort(windows.begin(), windows.end());
  double covered = 0.0;
  double cur_lo = 0.0, cur_hi = -1.0;
  for (const auto& [lo, hi] : windows) {
    if (hi <= cur_hi) continue;
    if (lo > cur_hi) {
      if (cur_hi > cur_lo) covered += cur_hi - cur_lo;
      cur_lo = lo;
    }
    cur_hi = hi;
  }
  if (cur_hi > cur_lo) covered += cur_hi - cur_lo;

  const auto trace = lyapunov_trace(tr, g);
  const double v0 = trace.front().second;
  const double vend = trace.back().second;
  const bool ok = vend <= v0 - alpha * covered + tol;
  return CheckResult{"hold_decrease", ok,
                     "V drop " + format_double(v0 - vend) + " vs alpha*overlap " +
                         format_double(alpha * covered)};
}

inline CheckResult check_integrator_oracle(const Trajectory& tr, const Graph& g,
                                           const ProtocolParams& p, double h = 1e-6) {
  const auto res = oracles::fixed_step_replay(tr, g, p, h);
  const double tol = static_cast<double>(tr.num_events) * h;
  return CheckResult{"integrator_oracle", res.max_deviation <= tol,
                     "max deviation " + format_double(res.max_deviation) + " (bound " +
                         format_double(tol) + ") over " +
                         std::to_string(res.breakpoints_checked) + " breakpoints"};
}

inline CheckResult check_measure_oracle(const Trajectory& tr, std::uint64_t seed = 424242) {
  const auto& a = tr.attacks;
  double worst = 0.0;
  bool ok = true;
  for (int c = 0; c < 8; ++c) {
    const double lo = uniform_draw(seed, Stream::attack_shape, c, 0) * tr.horizon * 0.8;
    const double hi =
        lo + 0.01 + uniform_draw(seed, Stream::attack_shape, c, 1) * (tr.horizon - lo - 0.01);
    const std::size_t cells = 100000;
    const double got = jammed_measure(a, lo, hi);
    const double ref = oracles::grid_jammed_measure(a, lo, hi, cells);
    const double tol = (hi - lo) / cells * (2.0 * a.count() + 2.0);
    worst = std::max(worst, std::abs(got - ref) - tol);
    if (std::abs(got - ref) > tol) ok = false;
  }
  return CheckResult{"measure_oracle", ok, "worst excess over grid tolerance " + format_double(worst)};
}

inline CheckResult check_budget_oracle(const Trajectory& tr) {
  // Replay a few slots of the committed aware history against the grid
  // brute force.
  const auto& hist = tr.attacks;
  bool ok = true;
  double worst = 0.0;
  const double kappa = hist.kappa(), rho = hist.rho();
  std::size_t checked = 0;
  for (std::size_t k = 1; k < hist.count() && checked < 10; k += std::max<std::size_t>(1, hist.count() / 10)) {
    const double start = hist.start(k);
    std::vector<std::pair<double, double>> before;
    for (std::size_t j = 0; j < k; ++j) before.emplace_back(hist.start(j), hist.duration(j));
    const auto prefix = AttackIntervals::build(before, kappa, rho);
    const double cap = start;  // generous cap, we only compare the two routes
    const double got = max_jam_duration(prefix, kappa, rho, start, cap);
    const std::size_t steps = 20000;
    const double ref = oracles::grid_max_jam(prefix, kappa, rho, start, cap, steps);
    const double resolution = (start / steps) / (1.0 - rho);
    if (std::abs(got - ref) > resolution + 1e-12) ok = false;
    worst = std::max(worst, std::abs(got - ref));
    ++checked;
  }
  return CheckResult{"budget_oracle", ok,
                     std::to_string(checked) + " slots, worst gap " + format_double(worst)};
}

}  // namespace jamsim
