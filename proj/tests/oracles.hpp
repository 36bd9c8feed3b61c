#pragma once

// Reference implementations used only by tests. Each one is written from the
// definitions directly and shares no code with the library beyond the data
// types.

#include "explore/mapping.hpp"
#include "explore/world.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

namespace explore::oracle {

// Ray casting by brute-force sampling every `step` meters. Returns the first
// sample distance at which the ray is inside an opaque cell other than its
// starting cell, or max_range when none is found.
inline double sampled_depth(const Floorplan& plan, const WorldMode& mode, double ox, double oy,
                            double angle_rad, double max_range, double step = 0.001) {
  const double res = plan.resolution();
  const double dx = std::cos(angle_rad), dy = std::sin(angle_rad);
  const int sx = static_cast<int>(std::floor(ox / res)), sy = static_cast<int>(std::floor(oy / res));
  const long n = static_cast<long>(std::ceil(max_range / step));
  for (long k = 1; k <= n; ++k) {
    const double t = std::min(k * step, max_range);
    const int cx = static_cast<int>(std::floor((ox + t * dx) / res));
    const int cy = static_cast<int>(std::floor((oy + t * dy) / res));
    if (cx == sx && cy == sy) continue;
    const CellKind kind = plan.kind({cx, cy});
    if (kind == CellKind::Wall || (kind == CellKind::Door && mode.door_mismatch)) return t;
  }
  return max_range;
}

// Exact ray casting by slab intersection against every opaque cell near the
// ray. Returns the entry distance into the nearest opaque cell (other than the
// starting cell) that the ray crosses with positive length, together with the
// length of the ray inside that cell, or {max_range, 0} when none is crossed.
struct ExactHit {
  double depth;
  double chord;
};

inline ExactHit exact_depth(const Floorplan& plan, const WorldMode& mode, double ox, double oy,
                            double angle_rad, double max_range) {
  const double res = plan.resolution();
  const double dx = std::cos(angle_rad), dy = std::sin(angle_rad);
  const int sx = static_cast<int>(std::floor(ox / res)), sy = static_cast<int>(std::floor(oy / res));
  const int x0 = static_cast<int>(std::floor((std::min(ox, ox + max_range * dx)) / res)) - 1;
  const int x1 = static_cast<int>(std::floor((std::max(ox, ox + max_range * dx)) / res)) + 1;
  const int y0 = static_cast<int>(std::floor((std::min(oy, oy + max_range * dy)) / res)) - 1;
  const int y1 = static_cast<int>(std::floor((std::max(oy, oy + max_range * dy)) / res)) + 1;
  ExactHit best{max_range, 0.0};
  for (int cy = y0; cy <= y1; ++cy)
    for (int cx = x0; cx <= x1; ++cx) {
      if (cx == sx && cy == sy) continue;
      const CellKind kind = plan.kind({cx, cy});
      if (!(kind == CellKind::Wall || (kind == CellKind::Door && mode.door_mismatch))) continue;
      double lo = 0.0, hi = max_range;
      auto slab = [&](double o, double d, double a, double b) {
        if (d == 0.0) {
          if (o < a || o >= b) hi = -1.0;
          return;
        }
        double t0 = (a - o) / d, t1 = (b - o) / d;
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
      };
      slab(ox, dx, cx * res, (cx + 1) * res);
      slab(oy, dy, cy * res, (cy + 1) * res);
      if (hi > lo && lo < best.depth) best = {lo, hi - lo};
    }
  return best;
}

// Map classification against the floorplan: a cell mapped Free must be
// see-through and passable, a cell mapped Occupied must be opaque. A door the
// sensor stood in is passable and was never looked at, so `origins` may list
// cells that are allowed to be Free while opaque.
inline std::size_t misclassified_cells(const OccupancyGrid& map, const Floorplan& plan,
                                       const WorldMode& mode,
                                       const std::set<GridCell>& origins = {}) {
  std::size_t bad = 0;
  for (int r = 0; r < map.height(); ++r)
    for (int c = 0; c < map.width(); ++c) {
      const GridCell cell{map.min_cell().x + c, map.min_cell().y + r};
      const auto s = static_cast<CellState>(map.cells()(r, c));
      const CellKind k = plan.kind(cell);
      const bool opaque = k == CellKind::Wall || (k == CellKind::Door && mode.door_mismatch);
      if (s == CellState::Free && opaque && !(k == CellKind::Door && origins.count(cell))) ++bad;
      if (s == CellState::Occupied && !opaque) ++bad;
    }
  return bad;
}

// Exact path costs a + b*sqrt(2) with integer a, b.
struct Cost {
  long a = 0;
  long b = 0;
  friend bool operator==(const Cost&, const Cost&) = default;
};

// Sign of (a1 + b1 r2) - (a2 + b2 r2) computed in integers.
inline int compare(const Cost& x, const Cost& y) {
  const long p = x.a - y.a, q = y.b - x.b;  // compare p with q*sqrt(2)
  if (p >= 0 && q <= 0) return (p == 0 && q == 0) ? 0 : 1;
  if (p <= 0 && q >= 0) return -1;
  // Same sign: compare squares.
  const long lhs = p * p, rhs = 2 * q * q;
  if (p > 0) return lhs > rhs ? 1 : -1;
  return lhs < rhs ? 1 : -1;
}

struct Lattice {
  int width = 0, height = 0;
  std::vector<CellState> cells;  // row-major, y * width + x
  CellState at(int x, int y) const {
    if (x < 0 || y < 0 || x >= width || y >= height) return CellState::Unknown;
    return cells[static_cast<std::size_t>(y * width + x)];
  }
};

// A lattice cell is usable if it is not Occupied, not Unknown unless
// unknown_is_free, and no Occupied cell lies within `radius` cells (Euclidean,
// on cell indices). Cells outside the lattice are not usable.
inline bool usable(const Lattice& g, int x, int y, bool unknown_is_free, int radius) {
  if (x < 0 || y < 0 || x >= g.width || y >= g.height) return false;
  const CellState s = g.at(x, y);
  if (s == CellState::Occupied) return false;
  if (s == CellState::Unknown && !unknown_is_free) return false;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius && g.at(x + dx, y + dy) == CellState::Occupied)
        return false;
  return true;
}

// Dijkstra over usable cells, 8-connected; diagonal moves need both side
// cells usable.
inline std::optional<Cost> shortest_cost(const Lattice& g, int sx, int sy, int gx, int gy,
                                         bool unknown_is_free, int radius) {
  auto ok = [&](int x, int y) { return usable(g, x, y, unknown_is_free, radius); };
  std::vector<std::optional<Cost>> best(static_cast<std::size_t>(g.width * g.height));
  std::vector<bool> done(best.size(), false);
  auto id = [&](int x, int y) { return static_cast<std::size_t>(y * g.width + x); };
  best[id(sx, sy)] = Cost{};
  // Linear scan for the minimum: slow but obviously correct.
  for (;;) {
    std::optional<std::size_t> u;
    for (std::size_t i = 0; i < best.size(); ++i)
      if (!done[i] && best[i] && (!u || compare(*best[i], *best[*u]) < 0)) u = i;
    if (!u) return std::nullopt;
    done[*u] = true;
    const int ux = static_cast<int>(*u) % g.width, uy = static_cast<int>(*u) / g.width;
    if (ux == gx && uy == gy) return best[*u];
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (!dx && !dy) continue;
        const int nx = ux + dx, ny = uy + dy;
        if (!ok(nx, ny)) continue;
        if (dx && dy && (!ok(ux + dx, uy) || !ok(ux, uy + dy))) continue;
        Cost c = *best[*u];
        if (dx && dy) ++c.b; else ++c.a;
        auto& slot = best[id(nx, ny)];
        if (!done[id(nx, ny)] && (!slot || compare(c, *slot) < 0)) slot = c;
      }
  }
}

// Number of cells reachable from `seed` through passable cells, 4-connected.
inline std::size_t reachable_cells(const Floorplan& plan, const GridCell& seed) {
  std::set<GridCell> seen{seed};
  std::queue<GridCell> q;
  q.push(seed);
  while (!q.empty()) {
    const GridCell c = q.front();
    q.pop();
    for (GridCell d : {GridCell{1, 0}, GridCell{-1, 0}, GridCell{0, 1}, GridCell{0, -1}}) {
      const GridCell n{c.x + d.x, c.y + d.y};
      if (plan.kind(n) == CellKind::Wall || seen.count(n)) continue;
      seen.insert(n);
      q.push(n);
    }
  }
  return seen.size();
}

}  // namespace explore::oracle
