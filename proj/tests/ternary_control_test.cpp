#include <catch2/catch_amalgamated.hpp>

#include "jamsim/ternary_control.hpp"

using jamsim::AttemptOutcome;
using jamsim::control_value;
using jamsim::ControllerState;
using jamsim::Errc;
using jamsim::Error;
using jamsim::on_attempt;
using jamsim::sign_eps;

TEST_CASE("deadband sign") {
  CHECK(sign_eps(0.05, 0.02) == 1);
  CHECK(sign_eps(-0.02, 0.02) == -1);  // boundary |z| = eps is inclusive
  CHECK(sign_eps(0.02, 0.02) == 1);
  CHECK(sign_eps(0.0199, 0.02) == 0);
  CHECK(sign_eps(-0.0199, 0.02) == 0);
  CHECK(sign_eps(0.0, 0.02) == 0);
}

TEST_CASE("successful attempt outside the deadband sets a full hold") {
  ControllerState s;
  s = on_attempt(s, {1.0, true, 0.05}, 0.5, 0.02);
  CHECK(s.input == 1);
  CHECK(s.active_until == 1.5);
  CHECK(s.attempt_index == 0);
}

TEST_CASE("failed attempt inside the previous hold keeps the old input") {
  const double hold = 0.5, eps = 0.02;
  ControllerState s;
  s = on_attempt(s, {1.0, true, -0.6}, hold, eps);
  CHECK(s.input == -1);
  // Blocked attempt at 1.3 < 1.0 + hold: the previous sign is carried and
  // the window still ends at the previous attempt's expiry.
  s = on_attempt(s, {1.3, false, 0.0}, hold, eps);
  CHECK(s.input == -1);
  CHECK(s.active_until == 1.5);
}

TEST_CASE("failed attempt at or past the previous expiry drops to zero") {
  const double hold = 0.5, eps = 0.02;
  ControllerState s;
  s = on_attempt(s, {1.0, true, 0.6}, hold, eps);
  s = on_attempt(s, {1.5, false, 0.0}, hold, eps);  // exactly t_prev + hold
  CHECK(s.input == 0);
  s = on_attempt(s, {2.4, true, 0.7}, hold, eps);
  s = on_attempt(s, {3.2, false, 0.0}, hold, eps);
  CHECK(s.input == 0);
}

TEST_CASE("successful attempt inside the deadband behaves like a zero candidate") {
  const double hold = 0.5, eps = 0.02;
  ControllerState s;
  s = on_attempt(s, {1.0, true, 0.9}, hold, eps);
  s = on_attempt(s, {1.2, true, 0.01}, hold, eps);  // inside deadband, within hold
  CHECK(s.input == 1);
  CHECK(s.active_until == 1.5);
}

TEST_CASE("control value is zero before the first attempt and after expiry") {
  ControllerState s;
  CHECK(control_value(s, 0.0) == 0);
  CHECK(control_value(s, 123.0) == 0);
  s = on_attempt(s, {1.0, true, 0.5}, 1.0, 0.02);
  CHECK(control_value(s, 1.0) == 1);
  CHECK(control_value(s, 1.99) == 1);
  CHECK(control_value(s, 2.0) == 0);  // half-open window
  CHECK(control_value(s, 5.0) == 0);
}

TEST_CASE("attempts must arrive in increasing time order") {
  ControllerState s;
  s = on_attempt(s, {1.0, true, 0.5}, 0.5, 0.02);
  CHECK_THROWS_MATCHES(on_attempt(s, {1.0, false, 0.0}, 0.5, 0.02), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::out_of_order_attempt;
                       }));
}

TEST_CASE("blocked-then-successful step pattern") {
  // Five attempts: success, blocked, success, success, success, with the
  // third and fourth close enough to hand over directly. Reproduces the
  // plotted step shape: holds of one hold-length, a sign switch mid-hold,
  // and zero in the long gaps.
  const double hold = 0.5, eps = 0.02;
  const double t0 = 0.1, t1 = 0.4, t2 = 1.0, t3 = 1.3, t4 = 2.5;
  ControllerState s;

  s = on_attempt(s, {t0, true, 0.8}, hold, eps);  // sets +1 until 0.6
  CHECK(control_value(s, 0.25) == 1);
  CHECK(control_value(s, 0.59) == 1);

  s = on_attempt(s, {t1, false, 0.0}, hold, eps);  // blocked inside hold: carry +1
  CHECK(control_value(s, 0.5) == 1);
  CHECK(control_value(s, 0.6) == 0);  // hold still ends at t0 + hold
  CHECK(control_value(s, 0.9) == 0);

  s = on_attempt(s, {t2, true, 0.9}, hold, eps);  // +1 until min(t3, 1.5)
  CHECK(control_value(s, 1.2) == 1);

  s = on_attempt(s, {t3, true, -0.9}, hold, eps);  // switch to -1 at t3
  CHECK(control_value(s, 1.3) == -1);
  CHECK(control_value(s, 1.79) == -1);
  CHECK(control_value(s, 1.8) == 0);  // t3 + hold
  CHECK(control_value(s, 2.4) == 0);

  s = on_attempt(s, {t4, true, 0.5}, hold, eps);
  CHECK(control_value(s, 2.7) == 1);
  CHECK(control_value(s, 3.0) == 0);
}
