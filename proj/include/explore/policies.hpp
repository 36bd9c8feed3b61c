#pragma once

#include "explore/kinematics.hpp"
#include "explore/mapping.hpp"
#include "explore/planner.hpp"
#include "explore/sensor.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace explore {

/// What a policy may look at. No ground truth: the only policy that consults
/// the floorplan is OracleFrontierPolicy, which receives it at construction.
class PolicyObservation {
 public:
  PolicyObservation(const DepthScan& scan, bool bump_prev, const Pose& est_pose,
                    const OccupancyGrid& map)
      : scan_(scan), bump_prev_(bump_prev), est_pose_(est_pose), map_(map) {}

  const DepthScan& scan() const { return scan_; }
  bool bump_prev() const { return bump_prev_; }
  const Pose& est_pose() const { return est_pose_; }
  const OccupancyGrid& map_view() const { return map_; }
  /// Computed on first use.
  const EgoCrops& crops() const {
    if (!crops_) crops_ = ego_crops(map_, est_pose_);
    return *crops_;
  }

 private:
  const DepthScan& scan_;
  bool bump_prev_;
  const Pose& est_pose_;
  const OccupancyGrid& map_;
  mutable std::optional<EgoCrops> crops_;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  /// Deterministic in (internal state, observation, rng stream).
  virtual Action act(const PolicyObservation& obs, Rng& rng) = 0;
};

/// Uniform over the six actions; ignores the observation.
Action random_action(Rng& rng);

class RandomPolicy final : public Policy {
 public:
  std::string_view name() const override { return "random"; }
  Action act(const PolicyObservation&, Rng& rng) override { return random_action(rng); }
};

/// Drives forward; after a bump turns k ~ U{1..20} times in one random direction.
class StraightPolicy final : public Policy {
 public:
  static constexpr int kMaxTurns = 20;
  std::string_view name() const override { return "straight"; }
  Action act(const PolicyObservation& obs, Rng& rng) override;

 private:
  int turns_left_ = 0;
  Action turn_ = Action::TurnLeft;
};

/// Free cells 4-adjacent to at least one Unknown cell.
bool is_frontier(const OccupancyGrid& map, const GridCell& c);
std::vector<GridCell> frontier_cells(const OccupancyGrid& map);

/// Classical frontier exploration on the agent's own map (unknown space is
/// assumed free). Keeps a target frontier cell, replans to it every step, and
/// picks the nearest frontier by path cost whenever the target is reached,
/// stops being a frontier, or becomes unreachable. Spins left when no
/// frontier is reachable.
class FrontierPolicy : public Policy {
 public:
  static constexpr double kArrivalTolerance = 0.25;  // m
  static constexpr int kMaxBumpsPerTarget = 3;
  // Steps a target may spend within arrival tolerance, over the whole episode,
  // before it is abandoned; enough to turn around and take one step.
  static constexpr int kMaxSettleSteps = 25;
  // A target is reconsidered once its plan costs more than twice what it did
  // at selection plus this many cells.
  static constexpr double kDetourSlack = 20.0;

  std::string_view name() const override { return "frontier"; }
  Action act(const PolicyObservation& obs, Rng& rng) override;

  const std::optional<GridCell>& target() const { return target_; }

 protected:
  /// The grid the planner sees; the base policy uses the agent's map as-is.
  virtual const OccupancyGrid& planning_map(const OccupancyGrid& map) { return map; }

 private:
  bool select_target(const OccupancyGrid& map, const Pose& est);
  bool reached(const GridCell& target, const Pose& est, double res) const;

  std::optional<GridCell> target_;
  double target_cost_ = 0.0;  // plan cost in cells when the target was chosen
  std::set<GridCell> exhausted_;          // unresolvable or repeatedly bumped targets
  std::vector<GridCell> bump_obstacles_;  // cells where a translation failed
  int bumps_on_target_ = 0;
  std::map<GridCell, int> settle_steps_;  // steps spent within tolerance of each target

  struct SearchKey {
    std::uint64_t map_revision;
    GridCell start;
    std::size_t exhausted, bump_obstacles;
    friend bool operator==(const SearchKey&, const SearchKey&) = default;
  };
  std::optional<SearchKey> failed_search_;
  std::optional<Action> last_action_;
  std::vector<GridCell> path_;
};

/// Frontier exploration that knows which map cells are doors: once any cell of
/// a door is mapped Occupied, the whole door is planned over as Free. Upper-bound comparator
/// for the door-mismatch experiment; identical to FrontierPolicy whenever no
/// door cell is mapped Occupied.
class OracleFrontierPolicy final : public FrontierPolicy {
 public:
  explicit OracleFrontierPolicy(const Floorplan& plan) : plan_(plan) {}
  std::string_view name() const override { return "oracle-frontier"; }

 protected:
  const OccupancyGrid& planning_map(const OccupancyGrid& map) override;

 private:
  const Floorplan& plan_;
  OccupancyGrid corrected_;
  std::optional<std::uint64_t> source_revision_;
  bool have_doors_ = false;
};

inline constexpr std::string_view kPolicyNames[] = {"random", "straight", "frontier",
                                                    "oracle-frontier"};

/// `plan` is required only for "oracle-frontier". Throws ConfigError on an
/// unknown name.
std::unique_ptr<Policy> make_policy(std::string_view name, const Floorplan* plan = nullptr);

}  // namespace explore
