#pragma once

#include "explore/core.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace explore {

enum class CellKind : std::uint8_t { Free = 0, Wall = 1, Door = 2 };

struct WorldMode {
  /// Doors are opaque to the depth sensor but remain passable.
  bool door_mismatch = false;
  friend bool operator==(const WorldMode&, const WorldMode&) = default;
};

/// Ground-truth world. Immutable once constructed; the constructor enforces
/// a closed boundary and a single door-connected traversable component.
class Floorplan {
 public:
  Floorplan(std::string name, double resolution, Grid<std::uint8_t> cells);

  int width() const { return static_cast<int>(cells_.cols()); }
  int height() const { return static_cast<int>(cells_.rows()); }
  double resolution() const { return resolution_; }
  const std::string& name() const { return name_; }
  const Grid<std::uint8_t>& cells() const { return cells_; }

  bool in_bounds(const GridCell& c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width() && c.y < height();
  }
  /// Out-of-bounds cells report Wall.
  CellKind kind(const GridCell& c) const {
    if (!in_bounds(c)) return CellKind::Wall;
    return static_cast<CellKind>(cells_(c.y, c.x));
  }
  bool passable(const GridCell& c) const { return kind(c) != CellKind::Wall; }
  bool opaque(const GridCell& c, const WorldMode& mode) const {
    const CellKind k = kind(c);
    return k == CellKind::Wall || (k == CellKind::Door && mode.door_mismatch);
  }

  std::size_t count(CellKind k) const;

  friend bool operator==(const Floorplan& a, const Floorplan& b) {
    return a.resolution_ == b.resolution_ && a.cells_.rows() == b.cells_.rows() &&
           a.cells_.cols() == b.cells_.cols() && (a.cells_ == b.cells_).all();
  }

 private:
  std::string name_;
  double resolution_;
  Grid<std::uint8_t> cells_;
};

// IO ------------------------------------------------------------------------

Floorplan parse_floorplan(std::string_view text, std::string name = "world");
Floorplan load_floorplan(const std::filesystem::path& path);
std::string format_floorplan(const Floorplan& plan);
void save_floorplan(const Floorplan& plan, const std::filesystem::path& path);

// Queries -------------------------------------------------------------------

/// Doors are always traversable; `mode` only affects what the sensor sees.
bool is_traversable(const Floorplan& plan, const WorldMode& mode, const Vec2& p);

/// (Free + Door cells) * resolution^2, in m^2.
double traversable_area(const Floorplan& plan);

/// 4-connected flood fill over passable cells from `seed`. Returns a mask.
Grid<std::uint8_t> reachable_mask(const Floorplan& plan, const GridCell& seed);

/// Passable cells whose centers are at least `clearance` meters from any Wall
/// cell center (Chebyshev ring scan).
std::vector<GridCell> cells_with_clearance(const Floorplan& plan, double clearance);

/// Uniformly random pose on a cell center with the given wall clearance.
Pose sample_pose(const Floorplan& plan, double clearance, Rng& rng);

// Generation ------------------------------------------------------------------

struct GenParams {
  double target_area = 100.0;  ///< m^2, traversable
  int min_rooms = 1;
  int max_rooms = 40;
  int corridor_width = 20;     ///< cells
  int door_width = 16;         ///< cells
  double resolution = 0.05;
  double min_room_side = 2.5;  ///< m
  double max_room_side = 6.0;  ///< m
  int wall_thickness = 2;      ///< cells
};

/// Rooms are rejection-sampled rectangles joined by L-shaped corridors along a
/// minimum spanning tree. Wherever a corridor cuts through a room's wall ring
/// the cut cells become Door, so every room is entered only through doors.
/// Deterministic in (seed, params).
Floorplan generate_house(std::uint64_t seed, const GenParams& params,
                         std::string name = {});

}  // namespace explore
