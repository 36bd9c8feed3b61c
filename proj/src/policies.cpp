#include "explore/policies.hpp"

#include <unordered_set>

namespace explore {

Action random_action(Rng& rng) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(kAllActions.size()) - 1);
  return kAllActions[static_cast<std::size_t>(pick(rng))];
}

Action StraightPolicy::act(const PolicyObservation& obs, Rng& rng) {
  if (turns_left_ > 0) {
    --turns_left_;
    return turn_;
  }
  if (obs.bump_prev()) {
    std::uniform_int_distribution<int> count(1, kMaxTurns);
    std::bernoulli_distribution left(0.5);
    const int k = count(rng);
    turn_ = left(rng) ? Action::TurnLeft : Action::TurnRight;
    turns_left_ = k - 1;
    return turn_;
  }
  return Action::Forward;
}

bool is_frontier(const OccupancyGrid& map, const GridCell& c) {
  if (map.state(c) != CellState::Free) return false;
  return map.state({c.x + 1, c.y}) == CellState::Unknown ||
         map.state({c.x - 1, c.y}) == CellState::Unknown ||
         map.state({c.x, c.y + 1}) == CellState::Unknown ||
         map.state({c.x, c.y - 1}) == CellState::Unknown;
}

std::vector<GridCell> frontier_cells(const OccupancyGrid& map) {
  std::vector<GridCell> out;
  const GridCell lo = map.min_cell();
  for (int y = lo.y; y < lo.y + map.height(); ++y)
    for (int x = lo.x; x < lo.x + map.width(); ++x)
      if (is_frontier(map, {x, y})) out.push_back({x, y});
  return out;
}

bool FrontierPolicy::select_target(const OccupancyGrid& map, const Pose& est) {
  const std::optional<GridCell> previous = target_;
  target_.reset();
  path_.clear();
  // Nothing that feeds the search has changed since it last came up empty.
  const SearchKey key{map.revision(), cell_of(est.position(), map.resolution()),
                      exhausted_.size(), bump_obstacles_.size()};
  if (failed_search_ == key) return false;

  PlanQuery q{map, est.position()};
  q.unknown_is_free = true;
  q.extra_obstacles = bump_obstacles_;
  PlanResult r = try_plan_to_nearest(
      q, [&](const GridCell& c) { return is_frontier(map, c) && !exhausted_.count(c); });
  if (!r.ok()) {
    failed_search_ = key;
    return false;
  }
  target_ = r.cells.back();
  target_cost_ = r.cost();
  if (target_ != previous) bumps_on_target_ = 0;
  path_ = std::move(r.cells);
  return true;
}

bool FrontierPolicy::reached(const GridCell& target, const Pose& est, double res) const {
  return cell_of(est.position(), res) == target ||
         (cell_center(target, res) - est.position()).norm() <= kArrivalTolerance;
}

Action FrontierPolicy::act(const PolicyObservation& obs, Rng& /*rng*/) {
  const Pose& est = obs.est_pose();
  const OccupancyGrid& map = planning_map(obs.map_view());
  const double res = map.resolution();

  if (obs.bump_prev() && last_action_ && !is_turn(*last_action_)) {
    const Pose attempted = apply_displacement(est, nominal_displacement(*last_action_));
    bump_obstacles_.push_back(cell_of(attempted.position(), res));
    if (target_ && ++bumps_on_target_ >= kMaxBumpsPerTarget) {
      exhausted_.insert(*target_);
      target_.reset();
    }
  }

  // Reaching the target restarts selection, which may pick the same cell again
  // when it is still the nearest frontier.
  if (target_ && (!is_frontier(map, *target_) || reached(*target_, est, res))) target_.reset();

  bool have_path = false;
  if (target_) {
    PlanQuery q{map, est.position(), *target_};
    q.unknown_is_free = true;
    q.extra_obstacles = bump_obstacles_;
    // When the map update forced a long detour, a nearer frontier may exist;
    // selection below picks it, or this target again at its new cost.
    q.max_cost = 2.0 * target_cost_ + kDetourSlack;
    PlanResult r = try_plan_path(q);
    if (r.ok()) {
      path_ = std::move(r.cells);
      have_path = true;
    }
  }
  if (!have_path) have_path = select_target(map, est);

  // A frontier the agent keeps reaching without resolving it is given up on.
  if (have_path && reached(*target_, est, res) && ++settle_steps_[*target_] > kMaxSettleSteps) {
    exhausted_.insert(*target_);
    have_path = select_target(map, est);
  }

  Action a = Action::TurnLeft;
  if (have_path && path_.size() > 1) {
    a = path_to_action(path_, res, est);
    // Undoing the previous turn means the waypoint bearing jumped across the
    // tolerance, which happens when a small pose update changes the shape of
    // an equal-cost path. Within one turn quantum, move on instead.
    const bool reverses = last_action_ && is_turn(a) && is_turn(*last_action_) && a != *last_action_;
    if (reverses && std::abs(waypoint_heading_error(path_, res, est)) <= kTurnAngle)
      a = Action::Forward;
  }
  last_action_ = a;
  return a;
}

const OccupancyGrid& OracleFrontierPolicy::planning_map(const OccupancyGrid& map) {
  if (map.occupied_cells() == 0) return map;
  if (source_revision_ == map.revision()) return have_doors_ ? corrected_ : map;
  source_revision_ = map.revision();
  have_doors_ = false;
  // Every door the agent has seen is opened in full: the whole connected band
  // of door cells becomes Free, including the parts still Unknown.
  std::vector<GridCell> stack;
  const GridCell lo = map.min_cell();
  const auto& cells = map.cells();
  for (int r = 0; r < map.height(); ++r)
    for (int c = 0; c < map.width(); ++c) {
      const GridCell g{lo.x + c, lo.y + r};
      if (cells(r, c) == static_cast<std::uint8_t>(CellState::Occupied) &&
          plan_.kind(g) == CellKind::Door)
        stack.push_back(g);
    }
  if (stack.empty()) return map;
  have_doors_ = true;
  corrected_ = map;
  std::unordered_set<GridCell> seen(stack.begin(), stack.end());
  while (!stack.empty()) {
    const GridCell g = stack.back();
    stack.pop_back();
    corrected_.set(g, CellState::Free);
    for (const GridCell n : {GridCell{g.x + 1, g.y}, GridCell{g.x - 1, g.y}, GridCell{g.x, g.y + 1},
                             GridCell{g.x, g.y - 1}})
      if (plan_.kind(n) == CellKind::Door && seen.insert(n).second) stack.push_back(n);
  }
  return corrected_;
}

std::unique_ptr<Policy> make_policy(std::string_view name, const Floorplan* plan) {
  if (name == "random") return std::make_unique<RandomPolicy>();
  if (name == "straight") return std::make_unique<StraightPolicy>();
  if (name == "frontier") return std::make_unique<FrontierPolicy>();
  if (name == "oracle-frontier") {
    if (!plan) throw ConfigError("oracle-frontier needs the floorplan");
    return std::make_unique<OracleFrontierPolicy>(*plan);
  }
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

}  // namespace explore
