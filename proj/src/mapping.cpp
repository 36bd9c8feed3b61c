#include "explore/mapping.hpp"

#include "explore/raycast.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

namespace explore {

namespace {
constexpr int kGrowMargin = 64;
}

OccupancyGrid::OccupancyGrid(double resolution) : resolution_(resolution) {
  if (!(resolution > 0.0)) throw ConfigError("map resolution must be positive");
}

void OccupancyGrid::reserve_box(const GridCell& lo, const GridCell& hi) {
  if (contains(lo) && contains(hi)) return;
  GridCell new_lo = lo, new_hi = hi;
  if (cells_.size() > 0) {
    new_lo = {std::min(lo.x, min_cell_.x), std::min(lo.y, min_cell_.y)};
    new_hi = {std::max(hi.x, min_cell_.x + width() - 1), std::max(hi.y, min_cell_.y + height() - 1)};
  }
  new_lo = {new_lo.x - kGrowMargin, new_lo.y - kGrowMargin};
  new_hi = {new_hi.x + kGrowMargin, new_hi.y + kGrowMargin};
  Grid<std::uint8_t> grown = Grid<std::uint8_t>::Zero(new_hi.y - new_lo.y + 1, new_hi.x - new_lo.x + 1);
  if (cells_.size() > 0) {
    grown.block(min_cell_.y - new_lo.y, min_cell_.x - new_lo.x, height(), width()) = cells_;
  }
  cells_ = std::move(grown);
  min_cell_ = new_lo;
  ++revision_;
}

void OccupancyGrid::set(const GridCell& c, CellState s) {
  if (s == CellState::Unknown) throw InvalidState("cells never return to Unknown");
  if (!contains(c)) reserve_box(c, c);
  std::uint8_t& v = cells_(c.y - min_cell_.y, c.x - min_cell_.x);
  const auto old = static_cast<CellState>(v);
  if (old == s) return;
  if (old == CellState::Free) --free_cells_;
  if (old == CellState::Occupied) --occupied_cells_;
  if (s == CellState::Free) ++free_cells_;
  if (s == CellState::Occupied) ++occupied_cells_;
  v = static_cast<std::uint8_t>(s);
  ++revision_;
}

OccupancyGrid OccupancyGrid::from_cells(double resolution, GridCell min_cell,
                                        Grid<std::uint8_t> cells) {
  OccupancyGrid g(resolution);
  g.min_cell_ = min_cell;
  g.cells_ = std::move(cells);
  for (Eigen::Index i = 0; i < g.cells_.size(); ++i) {
    switch (static_cast<CellState>(g.cells_.data()[i])) {
      case CellState::Free: ++g.free_cells_; break;
      case CellState::Occupied: ++g.occupied_cells_; break;
      case CellState::Unknown: break;
      default: throw ParseError("bad cell state in map");
    }
  }
  return g;
}

bool operator==(const OccupancyGrid& a, const OccupancyGrid& b) {
  if (a.resolution_ != b.resolution_ || a.known_cells() != b.known_cells()) return false;
  // Compare over the union of both windows; storage extents may differ.
  auto check = [](const OccupancyGrid& x, const OccupancyGrid& y) {
    for (int r = 0; r < x.height(); ++r)
      for (int c = 0; c < x.width(); ++c) {
        const GridCell cell{x.min_cell_.x + c, x.min_cell_.y + r};
        if (x.state(cell) != y.state(cell)) return false;
      }
    return true;
  };
  return check(a, b) && check(b, a);
}

void integrate(OccupancyGrid& map, const Pose& est_pose, const DepthScan& scan,
               const SensorConfig& cfg) {
  const Eigen::VectorXd angles = ray_angles(cfg);
  if (scan.size() != angles.size()) throw InvalidState("scan does not match sensor config");
  const double res = map.resolution();
  const Vec2 origin = est_pose.position();

  const double reach = cfg.max_range + 2.0 * res;
  map.reserve_box(cell_of(origin - Vec2(reach, reach), res), cell_of(origin + Vec2(reach, reach), res));

  std::vector<GridCell> free_cells;
  std::vector<GridCell> hit_cells;
  free_cells.reserve(static_cast<std::size_t>(scan.size()) * 64);
  // The obstacle goes in the cell holding the ray's end point. Without pose
  // error that end point lies exactly on the face of the cell that stopped the
  // ray; with error it can fall anywhere inside a cell. The agent's own cell
  // is never marked Occupied.
  const GridCell own = cell_of(origin, res);
  for (Eigen::Index i = 0; i < scan.size(); ++i) {
    const double d = scan.depths[i];
    const bool clipped = scan.clipped[i];
    std::optional<GridCell> last;
    traverse_grid(origin, ray_direction(est_pose, angles[i]), res, d,
                  [&](const GridCell& c, double t) {
                    if (last) free_cells.push_back(*last);
                    last.reset();
                    if (t < d || !clipped) last = c;
                    return true;
                  });
    if (!last) continue;
    if (clipped || *last == own) free_cells.push_back(*last);
    else hit_cells.push_back(*last);
  }
  for (const GridCell& c : free_cells) map.set(c, CellState::Free);
  for (const GridCell& c : hit_cells) map.set(c, CellState::Occupied);
}

EgoCrops ego_crops(const OccupancyGrid& map, const Pose& est_pose) {
  const Vec2 p = est_pose.position();
  const Vec2 ahead = est_pose.heading();
  const Vec2 left = est_pose.left();
  constexpr int half = kCropSize / 2;

  EgoCrops crops;
  crops.fine.resize(kCropSize, kCropSize);
  for (int r = 0; r < kCropSize; ++r)
    for (int c = 0; c < kCropSize; ++c) {
      const Vec2 q = p + (half - r) * kFineCropResolution * ahead + (half - c) * kFineCropResolution * left;
      crops.fine(r, c) = static_cast<std::uint8_t>(map.state_at(q));
    }

  constexpr int sub = static_cast<int>(kCoarseCropResolution / 0.05 + 0.5);
  const double step = kCoarseCropResolution / sub;
  crops.coarse.resize(kCropSize, kCropSize);
  for (int r = 0; r < kCropSize; ++r)
    for (int c = 0; c < kCropSize; ++c) {
      int counts[3] = {0, 0, 0};
      const double f0 = (half - r) * kCoarseCropResolution;
      const double l0 = (half - c) * kCoarseCropResolution;
      for (int i = 0; i < sub; ++i)
        for (int j = 0; j < sub; ++j) {
          const double f = f0 + (i - (sub - 1) / 2.0) * step;
          const double l = l0 + (j - (sub - 1) / 2.0) * step;
          ++counts[static_cast<int>(map.state_at(p + f * ahead + l * left))];
        }
      // Majority; ties resolved Occupied > Free > Unknown.
      int best = 2;
      for (int s : {1, 0})
        if (counts[s] > counts[best]) best = s;
      crops.coarse(r, c) = static_cast<std::uint8_t>(best);
    }
  return crops;
}

OccupancyGrid true_coverage_map(const Floorplan& plan, const WorldMode& mode,
                                std::span<const Pose> poses, const SensorConfig& cfg) {
  OccupancyGrid map(plan.resolution());
  for (const Pose& pose : poses) integrate(map, pose, render_scan(plan, mode, pose, cfg), cfg);
  return map;
}

void write_pgm(const OccupancyGrid& map, std::ostream& out) {
  const Vec2 o = map.origin();
  out << "P2\n";
  out << "# origin " << o.x() << ' ' << o.y() << " resolution " << map.resolution() << " min_cell "
      << map.min_cell().x << ' ' << map.min_cell().y << '\n';
  out << map.width() << ' ' << map.height() << "\n255\n";
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      const auto s = static_cast<CellState>(map.cells()(r, c));
      const int v = s == CellState::Unknown ? 0 : (s == CellState::Occupied ? 128 : 255);
      if (c) out << ' ';
      out << v;
    }
    out << '\n';
  }
}

void write_pgm(const OccupancyGrid& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_pgm(map, out);
}

OccupancyGrid read_pgm(std::istream& in) {
  std::string magic;
  std::getline(in, magic);
  if (magic != "P2") throw ParseError("not a P2 PGM");
  std::string comment;
  std::getline(in, comment);
  std::istringstream cs(comment);
  std::string hash, k_origin, k_res, k_min;
  double ox = 0, oy = 0, res = 0;
  GridCell min_cell;
  cs >> hash >> k_origin >> ox >> oy >> k_res >> res >> k_min >> min_cell.x >> min_cell.y;
  if (!cs || hash != "#" || k_origin != "origin" || k_res != "resolution" || k_min != "min_cell")
    throw ParseError("missing PGM origin/resolution comment");
  int w = 0, h = 0, maxval = 0;
  in >> w >> h >> maxval;
  if (!in || w < 0 || h < 0 || maxval != 255) throw ParseError("bad PGM header");
  Grid<std::uint8_t> cells(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      int v = -1;
      in >> v;
      if (!in) throw ParseError("truncated PGM");
      switch (v) {
        case 0: cells(r, c) = static_cast<std::uint8_t>(CellState::Unknown); break;
        case 128: cells(r, c) = static_cast<std::uint8_t>(CellState::Occupied); break;
        case 255: cells(r, c) = static_cast<std::uint8_t>(CellState::Free); break;
        default: throw ParseError("bad PGM pixel value " + std::to_string(v));
      }
    }
  return OccupancyGrid::from_cells(res, min_cell, std::move(cells));
}

}  // namespace explore
