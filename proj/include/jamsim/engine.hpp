#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "jamsim/attacks.hpp"
#include "jamsim/errors.hpp"
#include "jamsim/graph.hpp"
#include "jamsim/rng.hpp"
#include "jamsim/schedule.hpp"
#include "jamsim/ternary_control.hpp"

namespace jamsim {

enum class AttackKind { explicit_intervals, periodic, aware };

struct AttackConfig {
  AttackKind kind = AttackKind::explicit_intervals;
  AttackIntervals intervals;  // explicit_intervals
  double rho = 0.0;           // periodic, aware
  double sigma = 0.0;         // periodic
  double kappa = 0.0;         // periodic (declared), aware
  bool kappa_from_config = false;  // periodic: explicit kappa vs the rho/sigma default
};

inline AttackConfig explicit_attack(AttackIntervals intervals) {
  AttackConfig c;
  c.kind = AttackKind::explicit_intervals;
  c.rho = intervals.rho();
  c.kappa = intervals.kappa();
  c.intervals = std::move(intervals);
  return c;
}

inline AttackConfig periodic_attack(double rho, double sigma, double kappa = -1.0) {
  AttackConfig c;
  c.kind = AttackKind::periodic;
  c.rho = rho;
  c.sigma = sigma;
  c.kappa_from_config = kappa >= 0.0;
  c.kappa = kappa >= 0.0 ? kappa : rho / sigma;
  return c;
}

inline AttackConfig aware_attack(double kappa, double rho) {
  AttackConfig c;
  c.kind = AttackKind::aware;
  c.kappa = kappa;
  c.rho = rho;
  return c;
}

struct RunConfig {
  Graph graph;
  ProtocolParams protocol;
  std::vector<double> x0;  // empty: drawn uniformly in [0,1]^n from the seed
  AttackConfig attack;
  double horizon = 0.0;
  std::uint64_t seed = 0;
};

struct AttemptRecord {
  int agent = -1;
  long long slot = -1;
  double time = 0.0;
  bool success = false;
  double neighbor_offset = std::numeric_limits<double>::quiet_NaN();  // NaN when blocked
};

/// Exact piecewise-linear run history. Breakpoints are stored exactly where
/// some input changes (plus t = 0 and t = horizon); between consecutive
/// breakpoints every state evolves affinely:
///   x_i(t) = state(m, i) + input(m, i) * (t - times[m]).
struct Trajectory {
  int n = 0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  AttackKind attack_kind = AttackKind::explicit_intervals;

  std::vector<double> times;
  std::vector<double> states;        // row-major, size() * n
  std::vector<std::int8_t> inputs;   // row-major, size() * n
  std::vector<AttemptRecord> attempts;
  AttackIntervals attacks;  // realized jamming (committed history for aware)
  CommSchedule schedule;    // realized attempt times
  std::size_t num_events = 0;

  std::size_t size() const { return times.size(); }
  double state(std::size_t m, int i) const { return states[m * n + i]; }
  int input(std::size_t m, int i) const { return inputs[m * n + i]; }

  /// Index of the segment containing t: the last breakpoint at or before t.
  std::size_t segment_index(double t) const {
    std::size_t lo = 0, hi = times.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (times[mid] <= t)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo > 0 ? lo - 1 : 0;
  }

  double state_at(double t, int i) const {
    const std::size_t m = segment_index(t);
    return state(m, i) + input(m, i) * (t - times[m]);
  }

  /// sum_{j in N_i}(x_j(t) - x_i(t)) evaluated exactly at t.
  double neighbor_offset_at(const Graph& g, double t, int i) const {
    const std::size_t m = segment_index(t);
    const double dt = t - times[m];
    const double xi = state(m, i) + input(m, i) * dt;
    double acc = 0.0;
    for (int j : g.neighbors(i)) acc += state(m, j) + input(m, j) * dt - xi;
    return acc;
  }
};

namespace detail {

enum : int { kRankSlotStart = 0, kRankJamForcedEnd = 1, kRankAttempt = 2, kRankHoldExpiry = 3 };

struct Event {
  double time;
  int rank;
  int agent;       // attempt / hold expiry
  long long slot;  // attempt / slot start / jam end
  std::uint64_t gen;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.rank != b.rank) return a.rank > b.rank;
    if (a.agent != b.agent) return a.agent > b.agent;
    if (a.slot != b.slot) return a.slot > b.slot;
    return a.gen > b.gen;
  }
};

}  // namespace detail

/// Runs the exact event-driven simulation over an already realized schedule.
/// Ties at equal timestamps resolve as slot start < jam forced end <
/// attempt < hold expiry; combined with closed attack intervals this makes
/// every boundary outcome deterministic (an attempt simultaneous with a jam
/// start or a jam end is blocked).
inline Trajectory simulate_realized(const Graph& g, const ProtocolParams& p,
                                    const std::vector<double>& x0, const CommSchedule& sched,
                                    const AttackConfig& attack, double horizon,
                                    std::uint64_t seed = 0) {
  const int n = g.size();
  if (auto bad = validate_params(p, g)) throw Error(Errc::config_error, bad->message());
  if (!(horizon > 0.0)) throw Error(Errc::config_error, "horizon must be positive");
  if (static_cast<int>(x0.size()) != n)
    throw Error(Errc::config_error, "x0 dimension does not match the graph");
  if (sched.agents() != n) throw Error(Errc::config_error, "schedule does not match the graph");

  const bool aware = attack.kind == AttackKind::aware;
  double shared_delta = p.delta[0];
  if (aware) {
    for (double d : p.delta)
      if (d != shared_delta)
        throw Error(Errc::nonuniform_delta, "the aware attacker requires one shared delta");
  }

  AttackIntervals fixed;
  if (attack.kind == AttackKind::explicit_intervals) fixed = attack.intervals;
  if (attack.kind == AttackKind::periodic)
    fixed = periodic_schedule(attack.rho, attack.sigma, horizon)
                .with_budget(attack.kappa, attack.rho);
  std::optional<AwareAttacker> attacker;
  if (aware) attacker.emplace(n, shared_delta, attack.kappa, attack.rho);

  std::vector<detail::Event> initial;
  for (int i = 0; i < n; ++i) {
    const auto& times = sched.attempt_times[i];
    for (std::size_t k = 0; k < times.size(); ++k)
      if (times[k] < horizon)
        initial.push_back({times[k], detail::kRankAttempt, i, static_cast<long long>(k), 0});
  }
  if (aware) {
    const auto slots = static_cast<long long>(std::ceil(horizon / shared_delta));
    for (long long k = 0; k < slots; ++k) {
      const double t0 = static_cast<double>(k) * shared_delta;
      if (t0 < horizon) initial.push_back({t0, detail::kRankSlotStart, -1, k, 0});
    }
  }
  std::priority_queue<detail::Event, std::vector<detail::Event>, detail::EventAfter> queue(
      detail::EventAfter{}, std::move(initial));

  std::vector<ControllerState> ctrl(n);
  for (int i = 0; i < n; ++i) ctrl[i].agent = i;
  std::vector<std::uint64_t> hold_gen(n, 0);

  Trajectory tr;
  tr.n = n;
  tr.horizon = horizon;
  tr.seed = seed;
  tr.attack_kind = attack.kind;
  tr.schedule = sched;

  std::vector<double> x = x0;
  std::vector<std::int8_t> u(n, 0);
  double t_last = 0.0;
  auto push_breakpoint = [&](double t) {
    tr.times.push_back(t);
    tr.states.insert(tr.states.end(), x.begin(), x.end());
    tr.inputs.insert(tr.inputs.end(), u.begin(), u.end());
  };
  push_breakpoint(0.0);

  // Advance every state affinely to t and snapshot a new breakpoint.
  auto advance_to = [&](double t) {
    const double dt = t - t_last;
    for (int j = 0; j < n; ++j) x[j] += u[j] * dt;
    t_last = t;
    push_breakpoint(t);
  };
  // Input change at time t; reuses the breakpoint when t coincides.
  auto set_input = [&](int i, int v, double t) {
    if (v == u[i]) return;
    if (t > t_last) advance_to(t);
    u[i] = static_cast<std::int8_t>(v);
    tr.inputs[(tr.size() - 1) * n + i] = u[i];
  };
  auto state_now = [&](double t, int j) { return x[j] + u[j] * (t - t_last); };

  while (!queue.empty()) {
    const detail::Event ev = queue.top();
    queue.pop();
    if (ev.time >= horizon) break;
    switch (ev.rank) {
      case detail::kRankSlotStart: {
        const auto plan = attacker->slot_start(ev.slot, ev.time);
        if (plan.jam_on && plan.forced_end < horizon)
          queue.push({plan.forced_end, detail::kRankJamForcedEnd, -1, ev.slot, 0});
        break;
      }
      case detail::kRankJamForcedEnd:
        attacker->force_end(ev.slot);
        break;
      case detail::kRankAttempt: {
        const int i = ev.agent;
        const bool blocked = aware ? attacker->blocks(ev.time) : is_jammed(fixed, ev.time);
        double offset = std::numeric_limits<double>::quiet_NaN();
        if (!blocked) {
          const double xi = state_now(ev.time, i);
          double acc = 0.0;
          for (int j : g.neighbors(i)) acc += state_now(ev.time, j) - xi;
          offset = acc;
        }
        ctrl[i] = on_attempt(ctrl[i], {ev.time, !blocked, blocked ? 0.0 : offset}, p.hold[i],
                             p.epsilon);
        if (aware) attacker->sense_attempt(ev.time, i);
        tr.attempts.push_back({i, ev.slot, ev.time, !blocked, offset});
        set_input(i, control_value(ctrl[i], ev.time), ev.time);
        ++hold_gen[i];
        if (ctrl[i].input != 0 && ctrl[i].active_until < horizon)
          queue.push({ctrl[i].active_until, detail::kRankHoldExpiry, i, -1, hold_gen[i]});
        break;
      }
      case detail::kRankHoldExpiry:
        if (ev.gen != hold_gen[ev.agent]) break;  // superseded by a later attempt
        set_input(ev.agent, 0, ev.time);
        break;
    }
    ++tr.num_events;
  }

  if (aware) attacker->finalize(horizon);
  if (t_last < horizon) advance_to(horizon);
  tr.attacks = aware ? attacker->history() : std::move(fixed);
  return tr;
}

/// Draws the schedule (and x0 when absent) from the master seed, realizes
/// the configured attack process, and simulates.
inline Trajectory simulate(const RunConfig& cfg) {
  std::vector<double> x0 = cfg.x0;
  if (x0.empty()) {
    x0.resize(cfg.graph.size());
    for (int i = 0; i < cfg.graph.size(); ++i)
      x0[i] = uniform_draw(cfg.seed, Stream::initial_state, static_cast<std::uint64_t>(i), 0);
  }
  const CommSchedule sched = draw_schedule(cfg.protocol, cfg.graph, cfg.horizon, cfg.seed);
  return simulate_realized(cfg.graph, cfg.protocol, x0, sched, cfg.attack, cfg.horizon, cfg.seed);
}

/// 0.5 * x^T L x evaluated through the edge sum; exact null space on
/// consensus states.
inline double lyapunov_value(const Graph& g, const std::vector<double>& x) {
  double acc = 0.0;
  for (const auto& [a, b] : g.edges()) {
    const double d = x[a] - x[b];
    acc += d * d;
  }
  return 0.5 * acc;
}

/// V(x) at every breakpoint. Between breakpoints V is quadratic in t and
/// can be derived from the stored states and inputs; it is not stored.
inline std::vector<std::pair<double, double>> lyapunov_trace(const Trajectory& tr,
                                                             const Graph& g) {
  std::vector<std::pair<double, double>> out;
  out.reserve(tr.size());
  for (std::size_t m = 0; m < tr.size(); ++m) {
    double acc = 0.0;
    for (const auto& [a, b] : g.edges()) {
      const double d = tr.state(m, a) - tr.state(m, b);
      acc += d * d;
    }
    out.emplace_back(tr.times[m], 0.5 * acc);
  }
  return out;
}

struct ConsensusTimes {
  std::optional<double> first_entry;
  std::optional<double> settling;
};

/// Exact consensus-time extraction. Every neighbor offset is piecewise
/// affine, so the set {t : max_i |ave_i(t)| >= eps} is resolved per segment
/// in closed form; no sampling. first_entry is the infimum of the times in
/// the consensus set; settling is the last instant outside it (0 when the
/// whole run stays inside, absent when the run ends outside).
inline ConsensusTimes consensus_times(const Trajectory& tr, const Graph& g, double eps) {
  const int n = tr.n;
  ConsensusTimes out;
  if (tr.size() < 2) return out;

  bool any_outside = false;
  double last_outside = 0.0;
  bool entry_found = false;
  double entry = 0.0;

  std::vector<std::pair<double, double>> runs;  // merged "outside" intervals, segment-local
  for (std::size_t m = 0; m + 1 < tr.size(); ++m) {
    const double len = tr.times[m + 1] - tr.times[m];
    runs.clear();
    for (int i = 0; i < n; ++i) {
      double c = 0.0;
      int slope = 0;
      const int ui = tr.input(m, i);
      for (int j : g.neighbors(i)) {
        c += tr.state(m, j) - tr.state(m, i);
        slope += tr.input(m, j) - ui;
      }
      auto add = [&](double lo, double hi) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, len);
        if (lo <= hi) runs.emplace_back(lo, hi);
      };
      if (slope == 0) {
        if (std::abs(c) >= eps) add(0.0, len);
      } else {
        const double s = slope;
        const double up = (eps - c) / s;    // c + s d = +eps
        const double down = (-eps - c) / s;  // c + s d = -eps
        if (s > 0) {
          add(up, len);      // >= +eps on [up, len]
          add(0.0, down);    // <= -eps on [0, down]
        } else {
          add(0.0, up);
          add(down, len);
        }
      }
    }
    if (runs.empty()) {
      if (!entry_found) {
        entry_found = true;
        entry = tr.times[m];
      }
      continue;
    }
    std::sort(runs.begin(), runs.end());
    std::size_t merged = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
      if (runs[r].first <= runs[merged].second)
        runs[merged].second = std::max(runs[merged].second, runs[r].second);
      else
        runs[++merged] = runs[r];
    }
    runs.resize(merged + 1);
    any_outside = true;
    last_outside = std::max(last_outside, tr.times[m] + runs.back().second);
    if (!entry_found) {
      if (runs.front().first > 0.0) {
        entry_found = true;
        entry = tr.times[m];
      } else if (runs.front().second < len) {
        entry_found = true;
        entry = tr.times[m] + runs.front().second;
      }
    }
  }

  if (entry_found) out.first_entry = entry;
  if (!any_outside) {
    out.settling = 0.0;
    return out;
  }
  // Outside at the final instant means the run never settled.
  bool outside_at_end = false;
  const std::size_t last = tr.size() - 1;
  for (int i = 0; i < n && !outside_at_end; ++i) {
    double c = 0.0;
    for (int j : g.neighbors(i)) c += tr.state(last, j) - tr.state(last, i);
    outside_at_end = std::abs(c) >= eps;
  }
  if (!outside_at_end) out.settling = last_outside;
  return out;
}

}  // namespace jamsim
