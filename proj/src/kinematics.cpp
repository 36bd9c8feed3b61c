#include "explore/kinematics.hpp"

namespace explore {

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Forward: return "forward";
    case Action::Backward: return "backward";
    case Action::StrafeLeft: return "strafe_left";
    case Action::StrafeRight: return "strafe_right";
    case Action::TurnLeft: return "turn_left";
    case Action::TurnRight: return "turn_right";
  }
  return "unknown";
}

std::optional<Action> parse_action(std::string_view s) {
  for (Action a : kAllActions)
    if (to_string(a) == s) return a;
  return std::nullopt;
}

Displacement nominal_displacement(Action a) {
  switch (a) {
    case Action::Forward: return {kStepLength, 0.0, 0.0};
    case Action::Backward: return {-kStepLength, 0.0, 0.0};
    case Action::StrafeLeft: return {0.0, kStepLength, 0.0};
    case Action::StrafeRight: return {0.0, -kStepLength, 0.0};
    case Action::TurnLeft: return {0.0, 0.0, kTurnAngle};
    case Action::TurnRight: return {0.0, 0.0, -kTurnAngle};
  }
  return {};
}

Pose apply_displacement(const Pose& pose, const Displacement& d) {
  Pose out = pose;
  if (d.forward != 0.0 || d.lateral != 0.0) {
    const Vec2 p = pose.position() + d.forward * pose.heading() + d.lateral * pose.left();
    out.x = p.x();
    out.y = p.y();
  }
  out.theta = normalize_degrees(pose.theta + d.turn);
  return out;
}

TrueTransition transition_true(const Floorplan& plan, const WorldMode& mode, const Pose& pose,
                               Action a) {
  if (!is_traversable(plan, mode, pose.position()))
    throw InvalidState("transition from a non-traversable pose");
  const Displacement d = nominal_displacement(a);
  if (is_turn(a)) return {apply_displacement(pose, d), false};

  const Pose target = apply_displacement(pose, d);
  const Vec2 from = pose.position();
  const Vec2 delta = target.position() - from;
  const int samples = static_cast<int>(std::ceil(kStepLength / kSweepSpacing - 1e-9));
  for (int k = 1; k <= samples; ++k) {
    const Vec2 p = k == samples ? target.position() : Vec2(from + delta * (double(k) / samples));
    if (!is_traversable(plan, mode, p)) return {pose, true};
  }
  return {target, false};
}

double truncated_gaussian(double sigma, Rng& rng) {
  if (sigma <= 0.0) return 0.0;
  std::normal_distribution<double> n(0.0, 1.0);
  double z;
  do {
    z = n(rng);
  } while (z < -1.0 || z > 1.0);
  return z * sigma;
}

Pose transition_estimated(const Pose& est, Action a, bool bump, const NoiseConfig& noise,
                          Rng& rng) {
  Displacement d = nominal_displacement(a);
  if (bump) {
    d.forward = 0.0;
    d.lateral = 0.0;
  }
  if (noise.eta > 0.0) {
    d.forward += truncated_gaussian(noise.eta, rng) * kStepLength;
    d.lateral += truncated_gaussian(noise.eta, rng) * kStepLength;
    d.turn += truncated_gaussian(noise.eta, rng) * kTurnAngle;
  }
  return apply_displacement(est, d);
}

StepOutcome step_agent(const Floorplan& plan, const WorldMode& mode, const Pose& true_pose,
                       const Pose& est_pose, Action a, const NoiseConfig& noise, Rng& rng) {
  const TrueTransition tt = transition_true(plan, mode, true_pose, a);
  return {tt.pose, transition_estimated(est_pose, a, tt.bump, noise, rng), tt.bump};
}

}  // namespace explore
