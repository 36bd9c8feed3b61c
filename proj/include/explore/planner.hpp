#pragma once

#include "explore/kinematics.hpp"
#include "explore/mapping.hpp"

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace explore {

inline constexpr double kSqrt2 = 1.41421356237309504880;

/// Passability semantics for grid planning on an OccupancyGrid.
///
/// A cell is passable when it is not Occupied (nor Unknown unless
/// `unknown_is_free`), is not an extra obstacle, and has no Occupied or extra
/// obstacle cell within `inflation_radius` (a disk of floor(r / res) cells).
/// An agent that starts inside an inflated band may move through cells whose
/// obstacle clearance is no smaller than its own, so it can always back out.
/// Searches are confined to the map window grown to include start and goal.
struct PlanQuery {
  const OccupancyGrid& map;
  Vec2 start;
  GridCell goal{};
  bool unknown_is_free = true;
  double inflation_radius = 0.10;
  std::span<const GridCell> extra_obstacles = {};
  /// Paths costing more than this many cells count as NoPath.
  double max_cost = std::numeric_limits<double>::infinity();
};

enum class PlanStatus { Ok, NoPath, InvalidStart };

struct PlanResult {
  PlanStatus status = PlanStatus::NoPath;
  std::vector<GridCell> cells;  ///< start cell first, goal cell last
  int straight_moves = 0;
  int diagonal_moves = 0;

  bool ok() const { return status == PlanStatus::Ok; }
  /// Path cost in cells (straight = 1, diagonal = sqrt 2).
  double cost() const { return straight_moves + diagonal_moves * kSqrt2; }
  double length_m(double resolution) const { return cost() * resolution; }
};

/// Optimal 8-connected path (no corner cutting past impassable cells).
/// A* with the octile heuristic; frontier ordered by (f, cell).
PlanResult try_plan_path(const PlanQuery& q);

/// Throwing variant: NoPathError / InvalidStartError.
PlanResult plan_path(const PlanQuery& q);

/// Dijkstra from the start; returns the path to the first popped cell (by
/// (cost, cell) order) that satisfies `accept`. `q.goal` is ignored.
PlanResult try_plan_to_nearest(const PlanQuery& q,
                               const std::function<bool(const GridCell&)>& accept);

/// Greedy path follower. Looks at the first path cell more than one step
/// length away (or the last cell), turns while the bearing error exceeds half
/// a turn quantum, strafes back toward the path when the lateral offset
/// exceeds half a step, and otherwise moves forward.
Action path_to_action(std::span<const GridCell> path, double resolution, const Pose& current);

/// Signed heading error (degrees, positive to the left) toward the waypoint
/// that path_to_action steers at.
double waypoint_heading_error(std::span<const GridCell> path, double resolution,
                              const Pose& current);

inline constexpr double kHeadingTolerance = kTurnAngle / 2.0;
inline constexpr double kLateralTolerance = kStepLength / 2.0;

}  // namespace explore
