#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jamsim/errors.hpp"
#include "jamsim/graph.hpp"
#include "jamsim/rng.hpp"

namespace jamsim {

/// Protocol parameters: per-agent slot length delta[i], per-agent hold time
/// hold[i] (the duration a nonzero ternary input persists), and the
/// consensus deadband epsilon.
struct ProtocolParams {
  std::vector<double> delta;
  std::vector<double> hold;
  double epsilon = 0.0;
};

struct ParamViolation {
  int agent = -1;
  double hold = 0.0;
  double bound = 0.0;

  std::string message() const {
    return "agent " + std::to_string(agent) + ": hold time " + std::to_string(hold) +
           " outside (0, " + std::to_string(bound) + ")";
  }
};

/// Checks the consensus hypothesis hold[i] in (0, min{epsilon/(2 d_i), delta[i]})
/// for every agent. Returns the first violating agent, or nullopt when all pass.
inline std::optional<ParamViolation> validate_params(const ProtocolParams& p, const Graph& g) {
  const int n = g.size();
  if (static_cast<int>(p.delta.size()) != n || static_cast<int>(p.hold.size()) != n)
    throw Error(Errc::config_error, "protocol parameter arrays must have one entry per agent");
  if (!(p.epsilon > 0.0)) throw Error(Errc::config_error, "epsilon must be positive");
  for (int i = 0; i < n; ++i) {
    if (!(p.delta[i] > 0.0)) throw Error(Errc::config_error, "delta must be positive");
    double bound = std::min(p.epsilon / (2.0 * g.degree(i)), p.delta[i]);
    if (!(p.hold[i] > 0.0) || !(p.hold[i] < bound))
      return ParamViolation{i, p.hold[i], bound};
  }
  return std::nullopt;
}

/// Realized random communication attempt times: attempt_times[i][k] is agent
/// i's attempt in its slot [k*delta_i, (k+1)*delta_i). Immutable after
/// drawing.
struct CommSchedule {
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> attempt_times;

  int agents() const { return static_cast<int>(attempt_times.size()); }
};

/// Draws one uniform attempt per slot per agent, covering the horizon.
/// Each draw is keyed by (seed, agent, slot), so the result is bit-identical
/// regardless of evaluation order or thread count.
inline CommSchedule draw_schedule(const ProtocolParams& p, const Graph& g, double horizon,
                                  std::uint64_t seed) {
  if (!(horizon > 0.0)) throw Error(Errc::domain_error, "horizon must be positive");
  if (auto bad = validate_params(p, g)) throw Error(Errc::config_error, bad->message());
  CommSchedule sched;
  sched.seed = seed;
  sched.attempt_times.resize(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double d = p.delta[i];
    const auto slots = static_cast<long long>(std::floor(horizon / d)) + 1;
    auto& times = sched.attempt_times[i];
    times.reserve(static_cast<std::size_t>(slots));
    for (long long k = 0; k < slots; ++k) {
      const double u = uniform_draw(seed, Stream::attempt_times, static_cast<std::uint64_t>(i),
                                    static_cast<std::uint64_t>(k));
      double t = static_cast<double>(k) * d + u * d;
      // Guard the half-open support against last-ulp rounding.
      const double lo = static_cast<double>(k) * d;
      const double hi = static_cast<double>(k + 1) * d;
      if (t >= hi) t = std::nextafter(hi, lo);
      if (t < lo) t = lo;
      times.push_back(t);
    }
  }
  return sched;
}

}  // namespace jamsim
