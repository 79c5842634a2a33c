#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "jamsim/errors.hpp"

namespace jamsim {

/// Ordered, disjoint closed jamming intervals [start_k, start_k + dur_k],
/// with the declared duration budget (kappa, rho). Both endpoints of every
/// interval jam; consecutive intervals satisfy start_{k+1} > end_k strictly.
class AttackIntervals {
 public:
  AttackIntervals() = default;

  static AttackIntervals build(const std::vector<std::pair<double, double>>& intervals,
                               double kappa, double rho) {
    AttackIntervals a;
    a.kappa_ = kappa;
    a.rho_ = rho;
    a.starts_.reserve(intervals.size());
    a.durs_.reserve(intervals.size());
    a.prefix_.reserve(intervals.size() + 1);
    a.prefix_.push_back(0.0);
    double prev_end = -std::numeric_limits<double>::infinity();
    for (const auto& [start, dur] : intervals) {
      if (!(start >= 0.0) || !(dur >= 0.0) || !(start > prev_end))
        throw Error(Errc::invalid_interval,
                    "attack intervals must be nonnegative, ordered, and disjoint");
      a.starts_.push_back(start);
      a.durs_.push_back(dur);
      a.prefix_.push_back(a.prefix_.back() + dur);
      prev_end = start + dur;
    }
    return a;
  }

  std::size_t count() const { return starts_.size(); }
  double start(std::size_t k) const { return starts_[k]; }
  double duration(std::size_t k) const { return durs_[k]; }
  double end(std::size_t k) const { return starts_[k] + durs_[k]; }
  double kappa() const { return kappa_; }
  double rho() const { return rho_; }

  /// Jammed time in [0, t]: the cumulative measure function. Continuous and
  /// piecewise linear in t.
  double coverage(double t) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
    if (it == starts_.begin()) return 0.0;
    const auto idx = static_cast<std::size_t>(it - starts_.begin()) - 1;
    return prefix_[idx] + std::min(durs_[idx], t - starts_[idx]);
  }

  /// Jammed measure before interval k begins.
  double coverage_before(std::size_t k) const { return prefix_[k]; }

  /// Same intervals, re-tagged with a different declared budget.
  AttackIntervals with_budget(double kappa, double rho) const {
    AttackIntervals a = *this;
    a.kappa_ = kappa;
    a.rho_ = rho;
    return a;
  }

 private:
  std::vector<double> starts_;
  std::vector<double> durs_;
  std::vector<double> prefix_;  // prefix_[k] = total duration of intervals 0..k-1
  double kappa_ = 0.0;
  double rho_ = 0.0;
};

/// True iff t lies inside some closed attack interval. A zero-duration
/// interval jams exactly its single instant.
inline bool is_jammed(const AttackIntervals& a, double t) {
  if (t < 0.0) return false;
  std::size_t lo = 0, hi = a.count();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (a.start(mid) <= t)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo > 0 && t <= a.end(lo - 1);
}

/// Lebesgue measure of (union of attack intervals) intersected with [tau, t].
inline double jammed_measure(const AttackIntervals& a, double tau, double t) {
  if (!(tau >= 0.0) || !(t >= tau))
    throw Error(Errc::invalid_interval, "jammed_measure needs 0 <= tau <= t");
  return a.coverage(t) - a.coverage(tau);
}

/// Periodic jamming: in each period 1/sigma the channel is idle for
/// (1-rho)/sigma and then jammed for rho/sigma. The declared kappa defaults
/// to one full burst, which is enough for the duration constraint to hold
/// over every window.
inline AttackIntervals periodic_schedule(double rho, double sigma, double horizon) {
  if (!(rho > 0.0) || !(rho < 1.0) || !(sigma > 0.0) || !(horizon > 0.0))
    throw Error(Errc::domain_error, "periodic_schedule needs rho in (0,1), sigma > 0, horizon > 0");
  std::vector<std::pair<double, double>> intervals;
  const double dur = rho / sigma;
  for (long long k = 0;; ++k) {
    const double start = static_cast<double>(k) / sigma + (1.0 - rho) / sigma;
    if (start > horizon) break;
    intervals.emplace_back(start, dur);
  }
  return AttackIntervals::build(intervals, dur, rho);
}

struct Assumption1Report {
  bool ok = true;
  double worst_tau = 0.0;
  double worst_t = 0.0;
  double excess = 0.0;  // jammed measure minus budget at the worst window

  std::string message() const {
    return "worst window [" + std::to_string(worst_tau) + ", " + std::to_string(worst_t) +
           "], excess " + std::to_string(excess);
  }
};

/// Verifies |jammed(tau,t)| <= kappa + rho (t - tau) for all 0 <= tau <= t
/// <= horizon. Writing F(s) = coverage(s) - rho s, the slack is
/// F(t) - F(tau) - kappa; F decreases outside attacks and increases inside,
/// so the worst pair sits at (an attack start or 0, an attack end or the
/// horizon). One ordered sweep over those candidates is exact.
inline Assumption1Report check_assumption1(const AttackIntervals& a, double kappa, double rho,
                                           double horizon, double tol = 0.0) {
  Assumption1Report rep;
  auto value_f = [&](double s) { return a.coverage(s) - rho * s; };
  double min_f = 0.0;  // F(0); tau = 0 is always a candidate
  double min_f_arg = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  auto consider_t = [&](double t) {
    const double gap = value_f(t) - min_f;
    if (gap > best) {
      best = gap;
      rep.worst_tau = min_f_arg;
      rep.worst_t = t;
    }
  };
  for (std::size_t k = 0; k < a.count(); ++k) {
    if (a.start(k) > horizon) break;
    const double f_start = a.coverage_before(k) - rho * a.start(k);
    if (f_start < min_f) {
      min_f = f_start;
      min_f_arg = a.start(k);
    }
    consider_t(std::min(a.end(k), horizon));
  }
  consider_t(horizon);
  rep.excess = best - kappa;
  rep.ok = rep.excess <= tol;
  return rep;
}

/// Longest jam that may start at `start_time` (and last at most `cap`)
/// without breaking the (kappa, rho) duration constraint, given the fully
/// committed history before `start_time`.
///
/// The binding constraint is s (1 - rho) <= min over tau in [0, start] of
/// f(tau), with f(tau) = kappa + rho (start - tau) - |jammed(tau, start)|.
/// f decreases outside committed attacks and increases inside, so its
/// minimum sits at a committed attack start or at one of {0, start}. This
/// candidate-set reduction is validated against a grid oracle in the tests.
inline double max_jam_duration(const AttackIntervals& history, double kappa, double rho,
                               double start_time, double cap) {
  if (!(rho > 0.0) || !(rho < 1.0) || !(kappa >= 0.0))
    throw Error(Errc::domain_error, "budget needs kappa >= 0 and rho in (0,1)");
  if (history.count() > 0 && history.end(history.count() - 1) > start_time)
    throw Error(Errc::domain_error, "history must lie entirely before the jam start");
  const double total = history.coverage(start_time);
  double min_f = std::min(0.0, total - rho * start_time);  // tau in {0, start_time}
  for (std::size_t k = 0; k < history.count(); ++k) {
    const double f = history.coverage_before(k) - rho * history.start(k);
    if (f < min_f) min_f = f;
  }
  const double s = (kappa + rho * start_time - total + min_f) / (1.0 - rho);
  return std::clamp(s, 0.0, cap);
}

/// The largest duration a jam starting at slot boundary k*delta can last
/// without violating the duration constraint, clamped to one slot.
inline double aware_budget(const AttackIntervals& history, double kappa, double rho, long long k,
                           double delta) {
  if (!(delta > 0.0) || k < 0) throw Error(Errc::domain_error, "aware_budget needs k >= 0, delta > 0");
  return max_jam_duration(history, kappa, rho, static_cast<double>(k) * delta, delta);
}

/// Online communication-aware jammer. It starts jamming at every slot
/// boundary k*delta with the largest budget the duration constraint allows,
/// senses every attempt on the channel (including its own jam), and turns
/// the jamming off right after the last agent of the slot has attempted --
/// or earlier, when the budget runs out. The committed history satisfies
/// the duration constraint by construction.
///
/// Events must be fed in time order: slot_start(k), then the slot's sensed
/// attempts and/or force_end(k). An attempt at exactly the jam-off instant
/// is still blocked (intervals are closed).
class AwareAttacker {
 public:
  AwareAttacker(int num_agents, double delta, double kappa, double rho)
      : n_(num_agents), delta_(delta), kappa_(kappa), rho_(rho), attempted_(num_agents, 0) {
    if (num_agents < 1 || !(delta > 0.0)) throw Error(Errc::domain_error, "bad attacker setup");
    if (!(rho > 0.0) || !(rho < 1.0) || !(kappa >= 0.0))
      throw Error(Errc::domain_error, "attacker needs kappa >= 0 and rho in (0,1)");
  }

  struct SlotPlan {
    double budget = 0.0;      // s_k
    double forced_end = 0.0;  // k delta + s_k
    bool jam_on = false;
  };

  SlotPlan slot_start(long long k, double now) {
    if (k != next_slot_ || jam_on_)
      throw Error(Errc::out_of_order_event, "slot_start out of order");
    bump_clock(now);
    ++next_slot_;
    slot_ = k;
    std::fill(attempted_.begin(), attempted_.end(), 0);
    attempted_count_ = 0;
    const double t0 = static_cast<double>(k) * delta_;
    const double f_here = cum_measure_ - rho_ * t0;  // tau = k delta candidate
    const double min_f = std::min({0.0, min_f_starts_, f_here});
    const double s =
        std::clamp((kappa_ + rho_ * t0 - cum_measure_ + min_f) / (1.0 - rho_), 0.0, delta_);
    budget_ = s;
    jam_start_ = t0;
    forced_end_ = t0 + s;
    jam_on_ = s > 0.0;
    return SlotPlan{budget_, forced_end_, jam_on_};
  }

  /// Whether an attempt at time t is blocked. Queried before sensing, so a
  /// jam that ends at this very attempt still blocks it.
  bool blocks(double t) const {
    if (jam_on_) return true;
    // Only the committed past can still cover t (closed right endpoints).
    std::size_t lo = 0, hi = starts_.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (starts_[mid] <= t)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo > 0 && t <= starts_[lo - 1] + durs_[lo - 1];
  }

  void sense_attempt(double t, int agent) {
    if (agent < 0 || agent >= n_) throw Error(Errc::index_out_of_range, "bad agent id");
    bump_clock(t);
    if (!attempted_[agent]) {
      attempted_[agent] = 1;
      ++attempted_count_;
    }
    if (jam_on_ && attempted_count_ == n_) end_jam(t);
  }

  void force_end(long long k) {
    if (jam_on_ && slot_ == k) end_jam(forced_end_);
  }

  /// Commits a jam still running when the simulation horizon cuts it off.
  void finalize(double horizon) {
    if (jam_on_) end_jam(std::min(horizon, forced_end_));
  }

  AttackIntervals history() const {
    std::vector<std::pair<double, double>> intervals;
    intervals.reserve(starts_.size());
    for (std::size_t i = 0; i < starts_.size(); ++i) intervals.emplace_back(starts_[i], durs_[i]);
    return AttackIntervals::build(intervals, kappa_, rho_);
  }

 private:
  void bump_clock(double t) {
    if (t < clock_) throw Error(Errc::out_of_order_event, "attacker events regressed in time");
    clock_ = t;
  }

  void end_jam(double t_end) {
    // Record the candidate F(a_k) before folding this jam into the measure;
    // the incremental minimum then matches the standalone budget formula.
    const double f_start = cum_measure_ - rho_ * jam_start_;
    if (f_start < min_f_starts_) min_f_starts_ = f_start;
    starts_.push_back(jam_start_);
    durs_.push_back(t_end - jam_start_);
    cum_measure_ += t_end - jam_start_;
    jam_on_ = false;
  }

  int n_;
  double delta_;
  double kappa_;
  double rho_;

  long long next_slot_ = 0;
  long long slot_ = -1;
  double clock_ = 0.0;
  std::vector<char> attempted_;
  int attempted_count_ = 0;

  bool jam_on_ = false;
  double jam_start_ = 0.0;
  double forced_end_ = 0.0;
  double budget_ = 0.0;

  std::vector<double> starts_;
  std::vector<double> durs_;
  double cum_measure_ = 0.0;
  double min_f_starts_ = std::numeric_limits<double>::infinity();
};

}  // namespace jamsim
