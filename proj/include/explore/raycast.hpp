#pragma once

#include "explore/core.hpp"

#include <cmath>
#include <limits>

namespace explore {

/// Exact grid traversal (Amanatides-Woo) on the world-anchored lattice.
/// A ray passing exactly through a lattice corner steps diagonally.
///
/// Calls `visit(cell, t_enter)` for each cell the ray passes through, in order,
/// starting with the origin cell (t_enter = 0). Boundary distances are computed
/// from the boundary index at every step rather than accumulated, so repeated
/// traversals with identical inputs produce bitwise-identical distances.
/// Stops when `visit` returns false or t_enter exceeds `max_t`.
template <typename Visitor>
void traverse_grid(const Vec2& origin, const Vec2& dir, double resolution, double max_t,
                   Visitor&& visit) {
  GridCell c = cell_of(origin, resolution);
  const int step_x = dir.x() > 0 ? 1 : (dir.x() < 0 ? -1 : 0);
  const int step_y = dir.y() > 0 ? 1 : (dir.y() < 0 ? -1 : 0);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  auto next_x = [&](int cx) {
    if (step_x == 0) return kInf;
    const double boundary = (step_x > 0 ? cx + 1 : cx) * resolution;
    return (boundary - origin.x()) / dir.x();
  };
  auto next_y = [&](int cy) {
    if (step_y == 0) return kInf;
    const double boundary = (step_y > 0 ? cy + 1 : cy) * resolution;
    return (boundary - origin.y()) / dir.y();
  };

  double t = 0.0;
  double tx = next_x(c.x);
  double ty = next_y(c.y);
  while (t <= max_t) {
    if (!visit(c, t)) return;
    if (tx == ty) {
      // Exactly through a lattice corner: step diagonally.
      t = tx;
      c.x += step_x;
      c.y += step_y;
      tx = next_x(c.x);
      ty = next_y(c.y);
    } else if (tx < ty) {
      t = tx;
      c.x += step_x;
      tx = next_x(c.x);
    } else {
      t = ty;
      c.y += step_y;
      ty = next_y(c.y);
    }
    if (!std::isfinite(t)) return;
  }
}

}  // namespace explore
