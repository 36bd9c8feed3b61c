#include "explore/world.hpp"

#include <algorithm>
#include <limits>

namespace explore {

namespace {

struct Rect {
  int x0, y0, x1, y1;  // half-open interior [x0, x1) x [y0, y1)
  int cx() const { return (x0 + x1) / 2; }
  int cy() const { return (y0 + y1) / 2; }
  bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
  Rect grown(int g) const { return {x0 - g, y0 - g, x1 + g, y1 + g}; }
  bool overlaps(const Rect& o) const {
    return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
  }
};

enum : std::uint8_t { kWall = 0, kFree = 1, kDoor = 2 };

class Layout {
 public:
  Layout(int side, const GenParams& p) : side_(side), params_(p) {}

  std::vector<Rect>& rooms() { return rooms_; }

  /// Carves rooms and MST corridors; returns the raw grid (kWall/kFree/kDoor).
  Grid<std::uint8_t> build(const std::vector<bool>& bend_x_first) const {
    Grid<std::uint8_t> g = Grid<std::uint8_t>::Constant(side_, side_, kWall);
    const int t = params_.wall_thickness;

    // ring_of(x, y): is the cell inside some room's wall band?
    Grid<std::uint8_t> ring = Grid<std::uint8_t>::Zero(side_, side_);
    for (const Rect& r : rooms_) {
      const Rect o = r.grown(t);
      for (int y = std::max(o.y0, 0); y < std::min(o.y1, side_); ++y)
        for (int x = std::max(o.x0, 0); x < std::min(o.x1, side_); ++x)
          if (!r.contains(x, y)) ring(y, x) = 1;
    }
    for (const Rect& r : rooms_)
      for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) {
          g(y, x) = kFree;
          ring(y, x) = 0;
        }

    const auto edges = spanning_tree();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const Rect& a = rooms_[edges[e].first];
      const Rect& b = rooms_[edges[e].second];
      const bool x_first = bend_x_first[e % bend_x_first.size()];
      const int bx = x_first ? b.cx() : a.cx();
      const int by = x_first ? a.cy() : b.cy();
      carve_segment(g, ring, a.cx(), a.cy(), bx, by);
      carve_segment(g, ring, bx, by, b.cx(), b.cy());
    }
    return g;
  }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> spanning_tree() const {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    const std::size_t n = rooms_.size();
    if (n < 2) return edges;
    std::vector<bool> in(n, false);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> parent(n, 0);
    in[0] = true;
    for (std::size_t i = 1; i < n; ++i) {
      best[i] = dist(0, i);
      parent[i] = 0;
    }
    for (std::size_t step = 1; step < n; ++step) {
      std::size_t pick = n;
      for (std::size_t i = 0; i < n; ++i)
        if (!in[i] && (pick == n || best[i] < best[pick])) pick = i;
      in[pick] = true;
      edges.emplace_back(parent[pick], pick);
      for (std::size_t i = 0; i < n; ++i)
        if (!in[i] && dist(pick, i) < best[i]) {
          best[i] = dist(pick, i);
          parent[i] = pick;
        }
    }
    return edges;
  }

  double dist(std::size_t i, std::size_t j) const {
    const double dx = rooms_[i].cx() - rooms_[j].cx();
    const double dy = rooms_[i].cy() - rooms_[j].cy();
    return std::hypot(dx, dy);
  }

  /// Axis-aligned strip of corridor_width around the segment. Ring cells inside
  /// the central door_width band become doors; other ring cells stay wall.
  void carve_segment(Grid<std::uint8_t>& g, const Grid<std::uint8_t>& ring, int ax, int ay,
                     int bx, int by) const {
    const int w = params_.corridor_width;
    const int half = w / 2;
    const int band_lo = (w - params_.door_width) / 2;
    const int band_hi = band_lo + params_.door_width;
    const bool horizontal = ay == by;
    const int x0 = std::min(ax, bx) - half, x1 = std::max(ax, bx) - half + w;
    const int y0 = std::min(ay, by) - half, y1 = std::max(ay, by) - half + w;
    for (int y = std::max(y0, 1); y < std::min(y1, side_ - 1); ++y) {
      for (int x = std::max(x0, 1); x < std::min(x1, side_ - 1); ++x) {
        if (ring(y, x)) {
          const int across = horizontal ? y - y0 : x - x0;
          if (across >= band_lo && across < band_hi) g(y, x) = kDoor;
        } else if (g(y, x) == kWall) {
          g(y, x) = kFree;
        }
      }
    }
  }

  int side_;
  GenParams params_;
  std::vector<Rect> rooms_;
};

std::size_t count_traversable(const Grid<std::uint8_t>& g) {
  return static_cast<std::size_t>((g != kWall).count());
}

bool connected(const Grid<std::uint8_t>& g) {
  const int h = static_cast<int>(g.rows()), w = static_cast<int>(g.cols());
  Grid<std::uint8_t> seen = Grid<std::uint8_t>::Zero(h, w);
  std::vector<GridCell> stack;
  for (int y = 0; y < h && stack.empty(); ++y)
    for (int x = 0; x < w; ++x)
      if (g(y, x) != kWall) {
        stack.push_back({x, y});
        seen(y, x) = 1;
        break;
      }
  std::size_t reached = stack.size();
  while (!stack.empty()) {
    const GridCell c = stack.back();
    stack.pop_back();
    const GridCell nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
    for (const GridCell& n : nbrs) {
      if (n.x < 0 || n.y < 0 || n.x >= w || n.y >= h) continue;
      if (g(n.y, n.x) != kWall && !seen(n.y, n.x)) {
        seen(n.y, n.x) = 1;
        ++reached;
        stack.push_back(n);
      }
    }
  }
  return reached == count_traversable(g);
}

Grid<std::uint8_t> to_cell_kinds(const Grid<std::uint8_t>& g) {
  Grid<std::uint8_t> out(g.rows(), g.cols());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const std::uint8_t v = g.data()[i];
    out.data()[i] = static_cast<std::uint8_t>(v == kWall   ? CellKind::Wall
                                              : v == kDoor ? CellKind::Door
                                                           : CellKind::Free);
  }
  return out;
}

}  // namespace

Floorplan generate_house(std::uint64_t seed, const GenParams& params, std::string name) {
  if (!(params.target_area >= 20.0 && params.target_area <= 2000.0))
    throw GenerationError("target_area outside [20, 2000] m^2");
  if (params.min_rooms < 1 || params.max_rooms < params.min_rooms)
    throw GenerationError("bad room count range");
  if (params.door_width < 1 || params.door_width > params.corridor_width)
    throw GenerationError("door_width must be in [1, corridor_width]");
  if (params.wall_thickness < 1 || !(params.resolution > 0.0))
    throw GenerationError("bad wall thickness or resolution");
  if (name.empty()) name = "house_" + std::to_string(seed);

  const double res = params.resolution;
  const double cell_area = res * res;
  const double target_cells = params.target_area / cell_area;
  const double max_side_m =
      std::max(params.min_room_side, std::min(params.max_room_side, std::sqrt(params.target_area)));
  const int min_side = std::max(2, static_cast<int>(std::lround(params.min_room_side / res)));
  const int max_side = std::max(min_side, static_cast<int>(std::lround(max_side_m / res)));
  const int t = params.wall_thickness;
  const int side = static_cast<int>(std::ceil(std::sqrt(params.target_area * 2.2) / res)) +
                   2 * (t + 2);

  Rng rng(mix_seed(seed));
  for (int attempt = 0; attempt < 200; ++attempt) {
    Layout layout(side, params);
    std::vector<bool> bends(64);
    for (auto&& b : bends) b = (rng() & 1U) != 0;
    std::uniform_int_distribution<int> side_dist(min_side, max_side);

    Grid<std::uint8_t> grid;
    double area_cells = 0.0;
    while (static_cast<int>(layout.rooms().size()) < params.max_rooms) {
      bool placed = false;
      for (int tries = 0; tries < 300 && !placed; ++tries) {
        const int rw = side_dist(rng), rh = side_dist(rng);
        const int lo = t + 1;
        const int hi_x = side - t - 1 - rw, hi_y = side - t - 1 - rh;
        if (hi_x < lo || hi_y < lo) continue;
        std::uniform_int_distribution<int> px(lo, hi_x), py(lo, hi_y);
        const Rect r{px(rng), py(rng), 0, 0};
        const Rect room{r.x0, r.y0, r.x0 + rw, r.y0 + rh};
        const bool clash = std::any_of(layout.rooms().begin(), layout.rooms().end(),
                                       [&](const Rect& o) { return room.grown(t).overlaps(o); });
        if (clash) continue;
        layout.rooms().push_back(room);
        placed = true;
      }
      if (!placed) break;
      grid = layout.build(bends);
      area_cells = static_cast<double>(count_traversable(grid));
      if (area_cells >= 0.95 * target_cells &&
          static_cast<int>(layout.rooms().size()) >= params.min_rooms)
        break;
      if (area_cells > 1.15 * target_cells) break;
    }
    const int n_rooms = static_cast<int>(layout.rooms().size());
    if (n_rooms < params.min_rooms || n_rooms > params.max_rooms) continue;
    if (area_cells < 0.85 * target_cells || area_cells > 1.15 * target_cells) continue;
    if (!connected(grid)) continue;
    return Floorplan(name, res, to_cell_kinds(grid));
  }
  throw GenerationError("could not satisfy generator constraints for seed " +
                        std::to_string(seed));
}

}  // namespace explore
