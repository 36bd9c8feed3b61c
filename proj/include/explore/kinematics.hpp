#pragma once

#include "explore/core.hpp"
#include "explore/world.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace explore {

enum class Action : std::uint8_t {
  Forward = 0,
  Backward,
  StrafeLeft,
  StrafeRight,
  TurnLeft,
  TurnRight,
};

inline constexpr std::array<Action, 6> kAllActions = {
    Action::Forward,   Action::Backward, Action::StrafeLeft,
    Action::StrafeRight, Action::TurnLeft, Action::TurnRight};

inline constexpr double kStepLength = 0.25;  // m
inline constexpr double kTurnAngle = 9.0;    // degrees
/// Spacing of collision samples along a translation.
inline constexpr double kSweepSpacing = 0.05;

std::string_view to_string(Action a);
std::optional<Action> parse_action(std::string_view s);

inline bool is_turn(Action a) { return a == Action::TurnLeft || a == Action::TurnRight; }

/// Motion in the agent frame: forward (m), left (m), counter-clockwise turn (deg).
struct Displacement {
  double forward = 0.0;
  double lateral = 0.0;
  double turn = 0.0;
};

Displacement nominal_displacement(Action a);

/// Applies an agent-frame displacement: translate in the current heading's
/// frame, then rotate. Both the true and estimated updates go through here.
Pose apply_displacement(const Pose& pose, const Displacement& d);

struct NoiseConfig {
  double eta = 0.0;  ///< std of each perturbation, as a fraction of the step
  std::uint64_t rng_seed = 0;
};

struct TrueTransition {
  Pose pose;
  bool bump = false;
};

/// Ground-truth transition with full-block collision semantics: a translation
/// happens only if every sample along the swept segment is traversable.
TrueTransition transition_true(const Floorplan& plan, const WorldMode& mode, const Pose& pose,
                               Action a);

/// Zero-mean Gaussian with standard deviation `sigma`, truncated to
/// [-sigma, +sigma] by rejection.
double truncated_gaussian(double sigma, Rng& rng);

/// Dead-reckoning update. A bumped translation integrates no motion; then each
/// agent-frame component is perturbed by eta-scaled truncated Gaussian noise.
Pose transition_estimated(const Pose& est, Action a, bool bump, const NoiseConfig& noise,
                          Rng& rng);

struct StepOutcome {
  Pose true_pose;
  Pose est_pose;
  bool bump = false;
};

StepOutcome step_agent(const Floorplan& plan, const WorldMode& mode, const Pose& true_pose,
                       const Pose& est_pose, Action a, const NoiseConfig& noise, Rng& rng);

}  // namespace explore
