#include "doctest.h"
#include "fixtures.hpp"

#include "explore/kinematics.hpp"

#include <cmath>

using namespace explore;
using explore::test::empty_room;
using explore::test::plan_from_rows;

namespace {

// Swept-segment oracle: the move succeeds iff the points at every 0.05 m along
// the segment (endpoint included) lie in non-Wall cells. Written with plain
// trigonometry, independent of the library's pose helpers.
bool sweep_clear(const Floorplan& plan, double x, double y, double theta_deg, double fwd,
                 double lat) {
  const double a = theta_deg * 3.14159265358979323846 / 180.0;
  const double dx = fwd * std::cos(a) - lat * std::sin(a);
  const double dy = fwd * std::sin(a) + lat * std::cos(a);
  for (int k = 1; k <= 5; ++k) {
    const double px = x + dx * k / 5.0, py = y + dy * k / 5.0;
    const int cx = static_cast<int>(std::floor(px / plan.resolution()));
    const int cy = static_cast<int>(std::floor(py / plan.resolution()));
    if (plan.kind({cx, cy}) == CellKind::Wall) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("forward in open space") {
  const Floorplan room = empty_room(60, 20);
  const Pose p{0.5, 0.5, 0.0};
  const TrueTransition t = transition_true(room, {}, p, Action::Forward);
  CHECK_FALSE(t.bump);
  CHECK(t.pose.x == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(t.pose.y == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.pose.theta == 0.0);
}

TEST_CASE("wall ahead blocks the whole step") {
  // Interior x in [0.05, 1.05); wall face at x = 1.05.
  const Floorplan room = empty_room(20, 20);
  const Pose p{0.95, 0.5, 0.0};
  const TrueTransition t = transition_true(room, {}, p, Action::Forward);
  CHECK(t.bump);
  CHECK(t.pose == p);
  CHECK_FALSE(sweep_clear(room, p.x, p.y, p.theta, 0.25, 0.0));
}

TEST_CASE("turns wrap and never bump") {
  const Floorplan room = empty_room(4, 4);
  const Pose p{0.1, 0.1, 355.0};
  const TrueTransition l = transition_true(room, {}, p, Action::TurnLeft);
  CHECK_FALSE(l.bump);
  CHECK(l.pose.theta == doctest::Approx(4.0).epsilon(1e-12));
  const TrueTransition r = transition_true(room, {}, Pose{0.1, 0.1, 3.0}, Action::TurnRight);
  CHECK(r.pose.theta == doctest::Approx(354.0).epsilon(1e-12));
  CHECK_FALSE(r.bump);
}

TEST_CASE("doors are passable in both modes") {
  const Floorplan p = plan_from_rows({"###########", "#....D....#", "###########"});
  const Pose start{0.125, 0.075, 0.0};
  for (bool mm : {false, true}) {
    const TrueTransition t = transition_true(p, WorldMode{mm}, start, Action::Forward);
    CHECK_FALSE(t.bump);
    CHECK(t.pose.x == doctest::Approx(0.375));
  }
}

TEST_CASE("transition from a wall is an invalid state") {
  const Floorplan room = empty_room(4, 4);
  CHECK_THROWS_AS(transition_true(room, {}, Pose{0.01, 0.01, 0.0}, Action::Forward),
                  InvalidState);
}

TEST_CASE("transition_true agrees with the swept-segment oracle") {
  GenParams gp;
  gp.target_area = 60.0;
  const Floorplan plan = generate_house(4, gp);
  Rng rng(11);
  std::uniform_real_distribution<double> ux(0.0, plan.width() * plan.resolution());
  std::uniform_real_distribution<double> uy(0.0, plan.height() * plan.resolution());
  std::uniform_real_distribution<double> uth(0.0, 360.0);
  int tested = 0, bumps = 0;
  while (tested < 4000) {
    const Pose p{ux(rng), uy(rng), uth(rng)};
    if (!is_traversable(plan, {}, p.position())) continue;
    for (Action a : {Action::Forward, Action::Backward, Action::StrafeLeft, Action::StrafeRight}) {
      const Displacement d = nominal_displacement(a);
      const bool clear = sweep_clear(plan, p.x, p.y, p.theta, d.forward, d.lateral);
      const TrueTransition t = transition_true(plan, {}, p, a);
      CHECK(t.bump == !clear);
      if (t.bump) {
        CHECK(t.pose == p);
        ++bumps;
      } else {
        CHECK(position_distance(t.pose, p) == doctest::Approx(0.25).epsilon(1e-9));
      }
      ++tested;
    }
  }
  CHECK(bumps > 0);
}

TEST_CASE("noiseless dead reckoning is exact") {
  const Floorplan room = empty_room(60, 60);
  Pose truth{1.5, 1.5, 0.0}, est = truth;
  NoiseConfig noise{0.0, 1};
  Rng rng(noise.rng_seed);
  Rng pick(5);
  for (int t = 0; t < 2000; ++t) {
    const Action a = kAllActions[pick() % 6];
    const StepOutcome o = step_agent(room, {}, truth, est, a, noise, rng);
    truth = o.true_pose;
    est = o.est_pose;
    CHECK(est == truth);
    CHECK(truth.theta >= 0.0);
    CHECK(truth.theta < 360.0);
    if (is_turn(a)) CHECK_FALSE(o.bump);
  }
}

TEST_CASE("estimated update: nominal, bump and perturbation bounds") {
  Rng rng(1);
  const Pose est{1.0, 2.0, 90.0};
  const Pose fwd = transition_estimated(est, Action::Forward, false, {0.0, 0}, rng);
  CHECK(fwd.x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fwd.y == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(transition_estimated(est, Action::Forward, true, {0.0, 0}, rng) == est);

  // eta = 0.04: every perturbation component is within 0.04 of the step.
  const double eta = 0.04;
  for (int i = 0; i < 5000; ++i) {
    for (Action a : kAllActions) {
      const Pose out = transition_estimated(est, a, false, {eta, 0}, rng);
      const Displacement d = nominal_displacement(a);
      const double th = est.theta * 3.14159265358979323846 / 180.0;
      const double dx = out.x - est.x, dy = out.y - est.y;
      const double fwd_err = dx * std::cos(th) + dy * std::sin(th) - d.forward;
      const double lat_err = -dx * std::sin(th) + dy * std::cos(th) - d.lateral;
      const double turn_err = wrap_degrees_signed(out.theta - est.theta - d.turn);
      CHECK(std::abs(fwd_err) <= 0.01 + 1e-12);
      CHECK(std::abs(lat_err) <= 0.01 + 1e-12);
      CHECK(std::abs(turn_err) <= 0.36 + 1e-9);
      CHECK(out.theta >= 0.0);
      CHECK(out.theta < 360.0);
    }
  }
}

TEST_CASE("truncated gaussian") {
  Rng a(42), b(42);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = truncated_gaussian(0.1, a);
    CHECK(x == truncated_gaussian(0.1, b));
    CHECK(std::abs(x) <= 0.1);
    sum += x;
    sq += x * x;
  }
  // Standard normal truncated to [-1, 1] has variance 1 - 2 phi(1) / (2 Phi(1) - 1).
  const double phi1 = std::exp(-0.5) / std::sqrt(2.0 * 3.14159265358979323846);
  const double mass = std::erf(1.0 / std::sqrt(2.0));
  const double var = 0.01 * (1.0 - 2.0 * phi1 / mass);
  CHECK(std::abs(sum / n) < 0.002);
  CHECK(sq / n == doctest::Approx(var).epsilon(0.05));
  CHECK(truncated_gaussian(0.0, a) == 0.0);
}

TEST_CASE("same seed gives the same perturbations") {
  Rng a(9), b(9);
  Pose pa{0, 0, 0}, pb{0, 0, 0};
  for (int i = 0; i < 100; ++i) {
    pa = transition_estimated(pa, Action::Forward, false, {0.1, 9}, a);
    pb = transition_estimated(pb, Action::Forward, false, {0.1, 9}, b);
  }
  CHECK(pa == pb);
}

TEST_CASE("action names round trip") {
  for (Action a : kAllActions) CHECK(parse_action(to_string(a)) == a);
  CHECK_FALSE(parse_action("jump").has_value());
}
