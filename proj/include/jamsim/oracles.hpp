#pragma once

// Independent cross-check routes. Everything here re-derives its answer
// without touching the code paths it validates: membership by linear scan,
// measures by per-interval clipping, budgets by grid minimization, and
// trajectories by forward stepping with an inline rewrite of the control
// law. Used by the verify command and the test suites.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "jamsim/attacks.hpp"
#include "jamsim/engine.hpp"
#include "jamsim/graph.hpp"
#include "jamsim/schedule.hpp"

namespace jamsim::oracles {

inline bool jammed_scan(const AttackIntervals& a, double t) {
  for (std::size_t k = 0; k < a.count(); ++k) {
    if (a.start(k) > t) return false;
    if (t <= a.end(k)) return true;
  }
  return false;
}

/// Clip-and-sum measure over a midpoint grid. Off from the true measure by
/// at most one cell per interval boundary.
inline double grid_jammed_measure(const AttackIntervals& a, double tau, double t,
                                  std::size_t cells) {
  const double width = (t - tau) / static_cast<double>(cells);
  double acc = 0.0;
  for (std::size_t c = 0; c < cells; ++c)
    if (jammed_scan(a, tau + (static_cast<double>(c) + 0.5) * width)) acc += width;
  return acc;
}

inline double clip_measure(const AttackIntervals& a, double tau, double t) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.count(); ++k) {
    const double lo = std::max(a.start(k), tau);
    const double hi = std::min(a.end(k), t);
    if (hi > lo) acc += hi - lo;
  }
  return acc;
}

/// Brute-force jam budget: minimizes the duration-constraint slack over a
/// uniform grid of window starts. Resolution step/(1-rho) bounds its error.
inline double grid_max_jam(const AttackIntervals& history, double kappa, double rho,
                           double start_time, double cap, std::size_t steps) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= steps; ++j) {
    const double tau = start_time * static_cast<double>(j) / static_cast<double>(steps);
    const double f = kappa + rho * (start_time - tau) - clip_measure(history, tau, start_time);
    worst = std::min(worst, f);
  }
  if (start_time == 0.0) worst = kappa;
  const double s = worst / (1.0 - rho);
  return std::clamp(s, 0.0, cap);
}

/// Brute-force worst window for the duration constraint over a dense grid
/// of (tau, t) pairs; returns max of measure - kappa - rho (t - tau).
inline double grid_worst_excess(const AttackIntervals& a, double kappa, double rho,
                                double horizon, std::size_t steps) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= steps; ++i) {
    const double tau = horizon * static_cast<double>(i) / static_cast<double>(steps);
    for (std::size_t j = i; j <= steps; ++j) {
      const double t = horizon * static_cast<double>(j) / static_cast<double>(steps);
      worst = std::max(worst, clip_measure(a, tau, t) - kappa - rho * (t - tau));
    }
  }
  return worst;
}

struct ReplayResult {
  double max_deviation = 0.0;
  std::size_t breakpoints_checked = 0;
};

/// Fixed-step forward integrator replaying a finished run over the same
/// realized schedule and attacks. States advance by plain accumulation in
/// steps of at most h; the step lands exactly on attempt, expiry, and
/// breakpoint instants so control decisions are evaluated at the true
/// times. Returns the worst state deviation over all stored breakpoints;
/// the guaranteed bound is num_events * h.
inline ReplayResult fixed_step_replay(const Trajectory& tr, const Graph& g,
                                      const ProtocolParams& p, double h) {
  const int n = tr.n;
  struct Replica {
    bool fresh = true;
    double prev_time = 0.0;
    int prev_candidate = 0;
    int input = 0;
    double until = 0.0;
  };
  std::vector<Replica> ctl(n);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = tr.state(0, i);
  std::vector<std::size_t> cursor(n, 0);

  ReplayResult res;
  std::size_t bp = 0;
  double t = 0.0;
  long long grid = 0;

  while (t < tr.horizon) {
    double stop = std::min(tr.horizon, static_cast<double>(grid + 1) * h);
    if (bp < tr.size() && tr.times[bp] > t) stop = std::min(stop, tr.times[bp]);
    for (int i = 0; i < n; ++i) {
      const auto& at = tr.schedule.attempt_times[i];
      if (cursor[i] < at.size() && at[cursor[i]] < tr.horizon && at[cursor[i]] > t)
        stop = std::min(stop, at[cursor[i]]);
      if (ctl[i].input != 0 && ctl[i].until > t) stop = std::min(stop, ctl[i].until);
    }

    const double dt = stop - t;
    for (int i = 0; i < n; ++i) x[i] += ctl[i].input * dt;
    t = stop;
    while (static_cast<double>(grid + 1) * h <= t) ++grid;

    if (bp < tr.size() && tr.times[bp] == t) {
      for (int i = 0; i < n; ++i)
        res.max_deviation = std::max(res.max_deviation, std::abs(x[i] - tr.state(bp, i)));
      ++res.breakpoints_checked;
      ++bp;
    }

    // Attempts first, then expiries, matching the simulator's tie order.
    for (int i = 0; i < n; ++i) {
      const auto& at = tr.schedule.attempt_times[i];
      if (cursor[i] >= at.size() || at[cursor[i]] != t || t >= tr.horizon) continue;
      ++cursor[i];
      auto& c = ctl[i];
      int candidate = 0;
      if (!jammed_scan(tr.attacks, t)) {
        double ave = 0.0;
        for (int j : g.neighbors(i)) ave += x[j] - x[i];
        if (ave >= p.epsilon)
          candidate = 1;
        else if (ave <= -p.epsilon)
          candidate = -1;
      }
      if (c.fresh) {
        c.fresh = false;
        c.input = candidate;
        c.until = t + p.hold[i];
      } else if (candidate != 0) {
        c.input = candidate;
        c.until = t + p.hold[i];
      } else if (t < c.prev_time + p.hold[i]) {
        c.input = c.prev_candidate;
        c.until = c.prev_time + p.hold[i];
      } else {
        c.input = 0;
        c.until = t + p.hold[i];
      }
      c.prev_time = t;
      c.prev_candidate = candidate;
    }
    for (int i = 0; i < n; ++i)
      if (ctl[i].input != 0 && ctl[i].until == t) ctl[i].input = 0;
  }

  if (bp < tr.size() && tr.times[bp] == t) {
    for (int i = 0; i < n; ++i)
      res.max_deviation = std::max(res.max_deviation, std::abs(x[i] - tr.state(bp, i)));
    ++res.breakpoints_checked;
  }
  return res;
}

}  // namespace jamsim::oracles
