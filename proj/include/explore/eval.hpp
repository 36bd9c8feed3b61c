#pragma once

#include "explore/kinematics.hpp"
#include "explore/mapping.hpp"
#include "explore/policies.hpp"
#include "explore/rewards.hpp"
#include "explore/sensor.hpp"
#include "explore/world.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace explore {

// Episodes -------------------------------------------------------------------

/// Minimum wall clearance of sampled start and goal poses.
inline constexpr double kStartClearance = 0.25;

struct EpisodeConfig {
  std::string policy = "frontier";
  double eta = 0.0;
  std::uint64_t seed = 0;
  int steps = 1000;
  WorldMode mode;
  SensorConfig sensor;
  RewardConfig reward;
  std::optional<Pose> start;  ///< sampled from `seed` when absent
};

struct TraceHeader {
  std::string world;
  std::string policy;
  double eta = 0.0;
  std::uint64_t seed = 0;
  bool door_mismatch = false;
  int steps = 0;
  Pose start;
  double initial_agent_coverage = 0.0;  ///< m^2, after the first scan
  double initial_true_coverage = 0.0;
  // Experiment bookkeeping (zero for standalone runs).
  int replicate = 0;
  int world_index = 0;
  int start_index = 0;
};

struct TraceStep {
  int t = 0;
  Action action = Action::Forward;
  Pose true_pose;
  Pose est_pose;
  bool bump = false;
  double reward_total = 0.0;
  double agent_coverage = 0.0;  ///< m^2
  double true_coverage = 0.0;   ///< m^2
};

struct EpisodeTrace {
  TraceHeader header;
  std::vector<TraceStep> steps;
};

struct EpisodeResult {
  EpisodeTrace trace;
  OccupancyGrid agent_map;
  OccupancyGrid true_map;
};

/// Called after every step with the step record and the agent's map.
using StepHook = std::function<void(const TraceStep&, const OccupancyGrid& agent_map)>;

/// Closed loop: act -> transition -> sense -> integrate (agent map at the
/// estimated pose, evaluation map at the true pose) -> reward. Step t records
/// the state after the t-th action.
EpisodeResult run_episode(const Floorplan& plan, const EpisodeConfig& cfg,
                          const StepHook& hook = {});

Pose sample_start(const Floorplan& plan, std::uint64_t seed);

// Coverage experiments ----------------------------------------------------------

struct CoverageExperimentConfig {
  std::vector<std::string> policies{"random", "straight", "frontier"};
  std::vector<double> etas{0.0};
  WorldMode mode;
  int starts_per_world = 5;
  int replicates = 3;
  int steps = 1000;
  std::uint64_t master_seed = 0;
  int jobs = 1;
  SensorConfig sensor;
};

/// Every (policy, eta, replicate, world, start) episode, in that nesting order.
/// Start poses and episode seeds depend only on (replicate, world, start), so
/// policies and noise levels are compared on identical starts.
std::vector<EpisodeTrace> run_coverage_experiment(std::span<const Floorplan> worlds,
                                                  const CoverageExperimentConfig& cfg);

struct CurveRow {
  int t = 0;
  std::string policy;
  double eta = 0.0;
  bool door_mismatch = false;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// True coverage per step: averaged over runs inside each replicate, then
/// mean / min / max across replicates. Rows ordered by (policy, eta, mode, t)
/// in first-appearance order of the groups.
std::vector<CurveRow> aggregate_coverage(std::span<const EpisodeTrace> traces);

/// Mean true coverage at the final step for each (policy, eta, mode) group.
double mean_final_coverage(std::span<const EpisodeTrace> traces, std::string_view policy,
                           double eta, bool door_mismatch);

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

// SPL -------------------------------------------------------------------------

struct SplRecord {
  double shortest = 0.0;  ///< l_i, m
  double executed = 0.0;  ///< p_i, m
  bool success = false;
};

/// Mean of S_i * l_i / max(p_i, l_i). Throws EmptyInputError for no records.
double spl(std::span<const SplRecord> records);

// Experience and localization ---------------------------------------------------

/// Pose descriptor standing in for image features: depth rays scaled by the
/// max range, followed by a 4x4-block, 3-state histogram of the fine
/// egocentric crop of a map built from that single scan; L2-normalized.
Eigen::VectorXd view_descriptor(const Floorplan& plan, const WorldMode& mode, const Pose& pose,
                                const SensorConfig& cfg = {});

struct ExperienceLog {
  std::vector<Eigen::VectorXd> descriptors;
  std::vector<Pose> poses;  ///< true poses
  OccupancyGrid map;        ///< agent map at the end of exploration
};

ExperienceLog collect_experience(const Floorplan& plan, const WorldMode& mode,
                                 const std::string& policy, int steps, std::uint64_t seed,
                                 const SensorConfig& cfg = {});

struct LocalizationMatch {
  std::size_t index = 0;
  Pose pose;
  double distance = 0.0;
};

/// k nearest log entries by Euclidean descriptor distance, ties by earlier index.
std::vector<LocalizationMatch> localize_goal(const ExperienceLog& log,
                                             const Eigen::VectorXd& goal_descriptor,
                                             std::size_t k);

struct LocalizationErrors {
  std::vector<double> top1;  ///< m, per query
  std::vector<double> topk;  ///< best of top-k, m, per query
};

LocalizationErrors localization_errors(const Floorplan& plan, const WorldMode& mode,
                                       const ExperienceLog& log, std::span<const Pose> goals,
                                       std::size_t k = 5, const SensorConfig& cfg = {});

/// Fraction of errors <= each threshold.
std::vector<double> success_curve(std::span<const double> errors,
                                  std::span<const double> thresholds);

// Downstream navigation ---------------------------------------------------------

struct NavigationTrial {
  Pose start;
  Pose goal;
  double shortest = 0.0;  ///< m, on the floorplan
};

/// Shortest 8-connected path length (m) between cell centers over the
/// floorplan's passable cells, no inflation. Throws NoPathError.
double floorplan_shortest_path(const Floorplan& plan, const Vec2& from, const Vec2& to);

std::vector<NavigationTrial> sample_navigation_trials(const Floorplan& plan, int n,
                                                      std::uint64_t seed);

struct NavigationOptions {
  double success_radius = 0.5;
  int budget_factor = 4;  ///< step budget = factor * ceil(l / step length)
  SensorConfig sensor;
  /// Navigate to the top-1 localized goal pose instead of the true goal
  /// (success is still judged against the true goal).
  bool localize_goals = false;
};

/// Runs one trial. With `prior` the agent plans on that map treating unknown
/// space as blocked and falls back to unknown-as-free when that fails; without
/// it the agent plans optimistically from scratch. Both integrate scans and
/// replan every step.
SplRecord navigate(const Floorplan& plan, const WorldMode& mode, const OccupancyGrid* prior,
                   const NavigationTrial& trial, const Pose& target,
                   const NavigationOptions& opts = {});

/// `log == nullptr` is the no-exploration arm.
std::vector<SplRecord> downstream_navigation(const Floorplan& plan, const WorldMode& mode,
                                             const ExperienceLog* log,
                                             std::span<const NavigationTrial> trials,
                                             const NavigationOptions& opts = {});

}  // namespace explore
