#include "explore/planner.hpp"

#include <algorithm>
#include <climits>
#include <queue>
#include <unordered_set>

namespace explore {

namespace {

constexpr int kNoObstacle = INT_MAX;

struct Neighbor {
  int dx, dy;
  bool diagonal;
};
constexpr Neighbor kNeighbors[8] = {{1, 0, false},  {-1, 0, false}, {0, 1, false},
                                    {0, -1, false}, {1, 1, true},   {1, -1, true},
                                    {-1, 1, true},  {-1, -1, true}};

/// Per-thread scratch buffers, invalidated by bumping `generation`.
struct Workspace {
  std::vector<std::uint32_t> seen;       // generation stamp: g valid
  std::vector<std::uint32_t> closed;     // generation stamp: expanded
  std::vector<std::uint32_t> memo;       // generation stamp: passable cached
  std::vector<std::uint8_t> passable;
  std::vector<int> g_straight;
  std::vector<int> g_diag;
  std::vector<int> parent;
  std::uint32_t generation = 0;

  void prepare(std::size_t n) {
    if (seen.size() < n) {
      seen.assign(n, 0);
      closed.assign(n, 0);
      memo.assign(n, 0);
      passable.assign(n, 0);
      g_straight.resize(n);
      g_diag.resize(n);
      parent.resize(n);
    }
    if (++generation == 0) {
      std::fill(seen.begin(), seen.end(), 0);
      std::fill(closed.begin(), closed.end(), 0);
      std::fill(memo.begin(), memo.end(), 0);
      generation = 1;
    }
  }
};

Workspace& workspace() {
  thread_local Workspace ws;
  return ws;
}

class SearchGrid {
 public:
  SearchGrid(const PlanQuery& q, const GridCell& start, const GridCell* goal)
      : q_(q), ws_(workspace()) {
    if (!(q.inflation_radius >= 0.0)) throw ConfigError("inflation_radius must be non-negative");
    const double res = q.map.resolution();
    radius_cells_ = static_cast<int>(std::floor(q.inflation_radius / res + 1e-9));
    for (int dy = -radius_cells_; dy <= radius_cells_; ++dy)
      for (int dx = -radius_cells_; dx <= radius_cells_; ++dx)
        if (dx * dx + dy * dy <= radius_cells_ * radius_cells_) disk_.push_back({dx, dy});
    std::sort(disk_.begin(), disk_.end(), [](const GridCell& a, const GridCell& b) {
      return a.x * a.x + a.y * a.y < b.x * b.x + b.y * b.y;
    });
    extra_.insert(q.extra_obstacles.begin(), q.extra_obstacles.end());

    GridCell lo = start, hi = start;
    auto include = [&](const GridCell& c) {
      lo = {std::min(lo.x, c.x), std::min(lo.y, c.y)};
      hi = {std::max(hi.x, c.x), std::max(hi.y, c.y)};
    };
    if (goal) include(*goal);
    if (q.map.width() > 0) {
      include(q.map.min_cell());
      include({q.map.min_cell().x + q.map.width() - 1, q.map.min_cell().y + q.map.height() - 1});
    }
    const int margin = radius_cells_ + 2;
    lo_ = {lo.x - margin, lo.y - margin};
    w_ = hi.x - lo.x + 1 + 2 * margin;
    h_ = hi.y - lo.y + 1 + 2 * margin;
    ws_.prepare(static_cast<std::size_t>(w_) * static_cast<std::size_t>(h_));

    start_clearance_ = kNoObstacle;
    start_clearance_ = clearance(start);
  }

  bool in_box(const GridCell& c) const {
    return c.x >= lo_.x && c.y >= lo_.y && c.x < lo_.x + w_ && c.y < lo_.y + h_;
  }
  int index(const GridCell& c) const { return (c.y - lo_.y) * w_ + (c.x - lo_.x); }
  GridCell cell(int idx) const { return {lo_.x + idx % w_, lo_.y + idx / w_}; }

  bool obstacle(const GridCell& c) const {
    return q_.map.state(c) == CellState::Occupied || (!extra_.empty() && extra_.count(c));
  }

  /// Squared distance (cells) to the nearest obstacle inside the disk.
  int clearance(const GridCell& c) const {
    for (const GridCell& o : disk_)
      if (obstacle({c.x + o.x, c.y + o.y})) return o.x * o.x + o.y * o.y;
    return kNoObstacle;
  }

  bool start_valid(const GridCell& s) const {
    const CellState st = q_.map.state(s);
    if (st == CellState::Occupied) return false;
    if (st == CellState::Unknown && !q_.unknown_is_free) return false;
    return true;
  }

  bool passable(const GridCell& c) {
    if (!in_box(c)) return false;
    const int i = index(c);
    if (ws_.memo[i] == ws_.generation) return ws_.passable[i] != 0;
    bool ok = true;
    const CellState st = q_.map.state(c);
    if (st == CellState::Occupied || (st == CellState::Unknown && !q_.unknown_is_free)) ok = false;
    if (ok && !extra_.empty() && extra_.count(c)) ok = false;
    if (ok) {
      const int cl = clearance(c);
      ok = cl == kNoObstacle || cl >= start_clearance_;
    }
    ws_.memo[i] = ws_.generation;
    ws_.passable[i] = ok ? 1 : 0;
    return ok;
  }

  Workspace& ws() { return ws_; }

 private:
  const PlanQuery& q_;
  Workspace& ws_;
  int radius_cells_ = 0;
  std::vector<GridCell> disk_;
  std::unordered_set<GridCell> extra_;
  GridCell lo_{};
  int w_ = 0, h_ = 0;
  int start_clearance_ = kNoObstacle;
};

struct OpenEntry {
  double f;
  GridCell cell;
  int idx;
  bool operator>(const OpenEntry& o) const {
    if (f != o.f) return f > o.f;
    return o.cell < cell;
  }
};

double octile(const GridCell& a, const GridCell& b) {
  const int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
  return std::max(dx, dy) - std::min(dx, dy) + kSqrt2 * std::min(dx, dy);
}

/// Generic best-first search. `heuristic` must be consistent; `accept` tests
/// popped cells.
template <typename Heuristic, typename Accept>
PlanResult search(const PlanQuery& q, const GridCell* goal, Heuristic&& heuristic,
                  Accept&& accept) {
  const GridCell start = cell_of(q.start, q.map.resolution());
  SearchGrid grid(q, start, goal);
  PlanResult result;
  if (!grid.start_valid(start)) {
    result.status = PlanStatus::InvalidStart;
    return result;
  }
  if (goal && (!grid.in_box(*goal) || (!(*goal == start) && !grid.passable(*goal)))) {
    result.status = PlanStatus::NoPath;
    return result;
  }
  Workspace& ws = grid.ws();
  const std::uint32_t gen = ws.generation;

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
  const int s = grid.index(start);
  ws.seen[s] = gen;
  ws.g_straight[s] = 0;
  ws.g_diag[s] = 0;
  ws.parent[s] = -1;
  open.push({heuristic(start), start, s});

  int found = -1;
  while (!open.empty()) {
    const OpenEntry e = open.top();
    open.pop();
    if (ws.closed[e.idx] == gen) continue;
    if (e.f > q.max_cost) break;
    ws.closed[e.idx] = gen;
    if (accept(e.cell)) {
      found = e.idx;
      break;
    }
    const int ga = ws.g_straight[e.idx], gb = ws.g_diag[e.idx];
    for (const Neighbor& nb : kNeighbors) {
      const GridCell n{e.cell.x + nb.dx, e.cell.y + nb.dy};
      if (!grid.passable(n)) continue;
      if (nb.diagonal && (!grid.passable({e.cell.x + nb.dx, e.cell.y}) ||
                          !grid.passable({e.cell.x, e.cell.y + nb.dy})))
        continue;
      const int ni = grid.index(n);
      if (ws.closed[ni] == gen) continue;
      const int na = ga + (nb.diagonal ? 0 : 1);
      const int nbd = gb + (nb.diagonal ? 1 : 0);
      const double ng = na + nbd * kSqrt2;
      if (ws.seen[ni] == gen && !(ng < ws.g_straight[ni] + ws.g_diag[ni] * kSqrt2)) continue;
      ws.seen[ni] = gen;
      ws.g_straight[ni] = na;
      ws.g_diag[ni] = nbd;
      ws.parent[ni] = e.idx;
      open.push({ng + heuristic(n), n, ni});
    }
  }
  if (found < 0) {
    result.status = PlanStatus::NoPath;
    return result;
  }
  result.status = PlanStatus::Ok;
  result.straight_moves = ws.g_straight[found];
  result.diagonal_moves = ws.g_diag[found];
  for (int i = found; i >= 0; i = ws.parent[i]) result.cells.push_back(grid.cell(i));
  std::reverse(result.cells.begin(), result.cells.end());
  return result;
}

}  // namespace

PlanResult try_plan_path(const PlanQuery& q) {
  const GridCell goal = q.goal;
  return search(
      q, &goal, [&](const GridCell& c) { return octile(c, goal); },
      [&](const GridCell& c) { return c == goal; });
}

PlanResult plan_path(const PlanQuery& q) {
  PlanResult r = try_plan_path(q);
  if (r.status == PlanStatus::InvalidStart) throw InvalidStartError("start cell is not passable");
  if (r.status == PlanStatus::NoPath) throw NoPathError("goal unreachable under map semantics");
  return r;
}

PlanResult try_plan_to_nearest(const PlanQuery& q,
                               const std::function<bool(const GridCell&)>& accept) {
  return search(
      q, nullptr, [](const GridCell&) { return 0.0; }, accept);
}

namespace {

struct Waypoint {
  std::size_t nearest;  // path index closest to the agent
  double heading_error;  // degrees, positive when the waypoint is to the left
};

Waypoint find_waypoint(std::span<const GridCell> path, double resolution, const Pose& current) {
  if (path.empty()) throw InvalidState("path_to_action needs a non-empty path");
  const Vec2 pos = current.position();
  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double d = (cell_center(path[i], resolution) - pos).squaredNorm();
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  std::size_t target = path.size() - 1;
  for (std::size_t i = nearest + 1; i < path.size(); ++i) {
    if ((cell_center(path[i], resolution) - pos).norm() > kStepLength) {
      target = i;
      break;
    }
  }
  const Vec2 to_target = cell_center(path[target], resolution) - pos;
  const double bearing = rad2deg(std::atan2(to_target.y(), to_target.x()));
  return {nearest, wrap_degrees_signed(bearing - current.theta)};
}

}  // namespace

double waypoint_heading_error(std::span<const GridCell> path, double resolution,
                              const Pose& current) {
  return find_waypoint(path, resolution, current).heading_error;
}

Action path_to_action(std::span<const GridCell> path, double resolution, const Pose& current) {
  const auto [nearest, err] = find_waypoint(path, resolution, current);
  if (std::abs(err) > kHeadingTolerance) return err > 0.0 ? Action::TurnLeft : Action::TurnRight;

  const double lateral = (cell_center(path[nearest], resolution) - current.position()).dot(current.left());
  if (std::abs(lateral) > kLateralTolerance)
    return lateral > 0.0 ? Action::StrafeLeft : Action::StrafeRight;
  return Action::Forward;
}

}  // namespace explore
