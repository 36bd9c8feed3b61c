#include "explore/eval.hpp"

#include "explore/planner.hpp"

#include <algorithm>
#include <numeric>

namespace explore {

namespace {
constexpr int kHistogramBlocks = 4;  // per side of the fine crop
}

Eigen::VectorXd view_descriptor(const Floorplan& plan, const WorldMode& mode, const Pose& pose,
                                const SensorConfig& cfg) {
  const DepthScan scan = render_scan(plan, mode, pose, cfg);
  OccupancyGrid local(plan.resolution());
  integrate(local, pose, scan, cfg);
  const EgoCrops crops = ego_crops(local, pose);

  const Eigen::Index n_rays = scan.size();
  Eigen::VectorXd d(n_rays + kHistogramBlocks * kHistogramBlocks * 3);
  d.head(n_rays) = scan.depths / cfg.max_range;
  constexpr int block = kCropSize / kHistogramBlocks;
  for (int br = 0; br < kHistogramBlocks; ++br)
    for (int bc = 0; bc < kHistogramBlocks; ++bc) {
      const auto cells = crops.fine.block(br * block, bc * block, block, block);
      for (int s = 0; s < 3; ++s) {
        const double frac = static_cast<double>((cells == static_cast<std::uint8_t>(s)).count()) /
                            (block * block);
        d[n_rays + (br * kHistogramBlocks + bc) * 3 + s] = frac;
      }
    }
  const double norm = d.norm();
  if (norm > 0.0) d /= norm;
  return d;
}

ExperienceLog collect_experience(const Floorplan& plan, const WorldMode& mode,
                                 const std::string& policy, int steps, std::uint64_t seed,
                                 const SensorConfig& cfg) {
  EpisodeConfig ec;
  ec.policy = policy;
  ec.seed = seed;
  ec.steps = steps;
  ec.mode = mode;
  ec.sensor = cfg;
  ExperienceLog log;
  log.descriptors.reserve(static_cast<std::size_t>(steps));
  log.poses.reserve(static_cast<std::size_t>(steps));
  EpisodeResult r = run_episode(plan, ec, [&](const TraceStep& s, const OccupancyGrid&) {
    log.descriptors.push_back(view_descriptor(plan, mode, s.true_pose, cfg));
    log.poses.push_back(s.true_pose);
  });
  log.map = std::move(r.agent_map);
  return log;
}

std::vector<LocalizationMatch> localize_goal(const ExperienceLog& log,
                                             const Eigen::VectorXd& goal_descriptor,
                                             std::size_t k) {
  if (log.descriptors.empty()) throw EmptyLogError("experience log is empty");
  std::vector<LocalizationMatch> all(log.descriptors.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    all[i] = {i, log.poses[i], (log.descriptors[i] - goal_descriptor).norm()};
  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(),
                    [](const LocalizationMatch& a, const LocalizationMatch& b) {
                      if (a.distance != b.distance) return a.distance < b.distance;
                      return a.index < b.index;
                    });
  all.resize(k);
  return all;
}

LocalizationErrors localization_errors(const Floorplan& plan, const WorldMode& mode,
                                       const ExperienceLog& log, std::span<const Pose> goals,
                                       std::size_t k, const SensorConfig& cfg) {
  LocalizationErrors out;
  for (const Pose& goal : goals) {
    const auto matches = localize_goal(log, view_descriptor(plan, mode, goal, cfg), k);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : matches) best = std::min(best, position_distance(m.pose, goal));
    out.top1.push_back(position_distance(matches.front().pose, goal));
    out.topk.push_back(best);
  }
  return out;
}

std::vector<double> success_curve(std::span<const double> errors,
                                  std::span<const double> thresholds) {
  std::vector<double> out;
  out.reserve(thresholds.size());
  for (double thr : thresholds) {
    const auto hits = std::count_if(errors.begin(), errors.end(), [&](double e) { return e <= thr; });
    out.push_back(errors.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(errors.size()));
  }
  return out;
}

namespace {

OccupancyGrid floorplan_as_map(const Floorplan& plan) {
  Grid<std::uint8_t> cells(plan.height(), plan.width());
  for (int y = 0; y < plan.height(); ++y)
    for (int x = 0; x < plan.width(); ++x)
      cells(y, x) = static_cast<std::uint8_t>(plan.passable({x, y}) ? CellState::Free
                                                                       : CellState::Occupied);
  return OccupancyGrid::from_cells(plan.resolution(), {0, 0}, std::move(cells));
}

}  // namespace

double floorplan_shortest_path(const Floorplan& plan, const Vec2& from, const Vec2& to) {
  const OccupancyGrid map = floorplan_as_map(plan);
  PlanQuery q{map, from, cell_of(to, plan.resolution())};
  q.unknown_is_free = false;
  q.inflation_radius = 0.0;
  return plan_path(q).length_m(plan.resolution());
}

std::vector<NavigationTrial> sample_navigation_trials(const Floorplan& plan, int n,
                                                      std::uint64_t seed) {
  const auto candidates = cells_with_clearance(plan, kStartClearance);
  if (candidates.empty()) throw InvalidState("world has no valid start cell");
  const OccupancyGrid map = floorplan_as_map(plan);
  Rng rng(derive_seed(seed, 0x9a7));
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  std::uniform_int_distribution<int> heading(0, 39);
  std::vector<NavigationTrial> trials;
  while (static_cast<int>(trials.size()) < n) {
    const Vec2 s = cell_center(candidates[pick(rng)], plan.resolution());
    const Vec2 g = cell_center(candidates[pick(rng)], plan.resolution());
    NavigationTrial t;
    t.start = {s.x(), s.y(), 9.0 * heading(rng)};
    t.goal = {g.x(), g.y(), 9.0 * heading(rng)};
    PlanQuery q{map, s, cell_of(g, plan.resolution())};
    q.unknown_is_free = false;
    q.inflation_radius = 0.0;
    const PlanResult r = try_plan_path(q);
    if (!r.ok() || r.cost() == 0) continue;
    t.shortest = r.length_m(plan.resolution());
    trials.push_back(t);
  }
  return trials;
}

SplRecord navigate(const Floorplan& plan, const WorldMode& mode, const OccupancyGrid* prior,
                   const NavigationTrial& trial, const Pose& target,
                   const NavigationOptions& opts) {
  SplRecord rec{trial.shortest, 0.0, false};
  OccupancyGrid map = prior ? *prior : OccupancyGrid(plan.resolution());
  const double res = map.resolution();
  const GridCell goal_cell = cell_of(target.position(), res);
  const int budget =
      opts.budget_factor * static_cast<int>(std::ceil(trial.shortest / kStepLength - 1e-9));

  Pose pose = trial.start;
  integrate(map, pose, render_scan(plan, mode, pose, opts.sensor), opts.sensor);
  std::vector<GridCell> bump_obstacles;
  std::optional<Action> last;
  bool last_bump = false;

  auto arrived = [&] { return position_distance(pose, trial.goal) <= opts.success_radius; };
  for (int step = 0; step < budget && !arrived(); ++step) {
    if (last_bump && last && !is_turn(*last))
      bump_obstacles.push_back(
          cell_of(apply_displacement(pose, nominal_displacement(*last)).position(), res));

    PlanQuery q{map, pose.position(), goal_cell};
    q.extra_obstacles = bump_obstacles;
    q.unknown_is_free = prior == nullptr;
    PlanResult r = try_plan_path(q);
    if (!r.ok() && !q.unknown_is_free) {
      q.unknown_is_free = true;
      r = try_plan_path(q);
    }
    if (!r.ok()) break;
    // At the target cell but outside the success radius: nothing left to do.
    if (r.cells.size() < 2) break;

    const Action a = path_to_action(r.cells, res, pose);
    const TrueTransition tt = transition_true(plan, mode, pose, a);
    rec.executed += position_distance(tt.pose, pose);
    pose = tt.pose;
    last = a;
    last_bump = tt.bump;
    integrate(map, pose, render_scan(plan, mode, pose, opts.sensor), opts.sensor);
  }
  rec.success = arrived();
  return rec;
}

std::vector<SplRecord> downstream_navigation(const Floorplan& plan, const WorldMode& mode,
                                             const ExperienceLog* log,
                                             std::span<const NavigationTrial> trials,
                                             const NavigationOptions& opts) {
  std::vector<SplRecord> out;
  out.reserve(trials.size());
  for (const NavigationTrial& trial : trials) {
    Pose target = trial.goal;
    if (log && opts.localize_goals) {
      target = localize_goal(*log, view_descriptor(plan, mode, trial.goal, opts.sensor), 1)
                   .front()
                   .pose;
    }
    out.push_back(navigate(plan, mode, log ? &log->map : nullptr, trial, target, opts));
  }
  return out;
}

}  // namespace explore
