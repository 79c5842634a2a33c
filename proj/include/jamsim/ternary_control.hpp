#pragma once

#include <cmath>
#include <cstdint>

#include "jamsim/errors.hpp"

namespace jamsim {

/// Ternary deadband sign: sign(z) when |z| >= eps (boundary inclusive),
/// otherwise 0.
inline int sign_eps(double z, double eps) {
  if (z >= eps) return 1;
  if (z <= -eps) return -1;
  return 0;
}

/// One communication attempt as seen by the controller. neighbor_offset is
/// the relative neighbor average sum_{j in N_i}(x_j - x_i) at the attempt
/// instant; it is only meaningful when success is true (the agent learns
/// nothing on a blocked attempt).
struct AttemptOutcome {
  double time = 0.0;
  bool success = false;
  double neighbor_offset = 0.0;
};

/// Per-agent ternary control memory. The emitted input is `input` on
/// [attempt time, active_until) and 0 afterwards until the next attempt;
/// before the first attempt it is identically 0.
struct ControllerState {
  int agent = -1;
  long long attempt_index = -1;  // index k of the last processed attempt
  double prev_time = 0.0;        // t_{k}
  int prev_utilde = 0;           // candidate input of the last attempt
  int input = 0;                 // current applied input, in {-1,0,1}
  double active_until = 0.0;     // input reverts to 0 at this time
};

/// Processes attempt k+1 and returns the updated state.
///
/// The candidate is zero on a blocked attempt and on a successful one whose
/// neighbor offset is inside the deadband. A zero candidate keeps the
/// previous candidate alive only while the previous attempt's hold window
/// is still open (strictly before prev_time + hold); at or past that
/// boundary the input drops to zero.
inline ControllerState on_attempt(ControllerState s, const AttemptOutcome& o, double hold,
                                  double eps) {
  const int utilde = o.success ? sign_eps(o.neighbor_offset, eps) : 0;
  if (s.attempt_index < 0) {
    s.input = utilde;
    s.active_until = o.time + hold;
  } else {
    if (!(o.time > s.prev_time))
      throw Error(Errc::out_of_order_attempt, "attempt times must strictly increase");
    if (utilde != 0) {
      s.input = utilde;
      s.active_until = o.time + hold;
    } else if (o.time < s.prev_time + hold) {
      s.input = s.prev_utilde;
      s.active_until = s.prev_time + hold;
    } else {
      s.input = 0;
      s.active_until = o.time + hold;
    }
  }
  s.prev_time = o.time;
  s.prev_utilde = utilde;
  ++s.attempt_index;
  return s;
}

/// Input value at time t, for t at or after the last processed attempt.
/// The window is half-open: exactly at active_until the input is 0.
inline int control_value(const ControllerState& s, double t) {
  if (s.attempt_index < 0) return 0;
  return t < s.active_until ? s.input : 0;
}

}  // namespace jamsim
