#pragma once

#include "explore/core.hpp"
#include "explore/sensor.hpp"
#include "explore/world.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>

namespace explore {

enum class CellState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

/// The agent's trinary map on the world-anchored lattice. Storage is a dense
/// window that grows on demand; cells outside the window read as Unknown.
class OccupancyGrid {
 public:
  explicit OccupancyGrid(double resolution = 0.05);

  double resolution() const { return resolution_; }
  /// Lattice cell stored at array index (0, 0).
  GridCell min_cell() const { return min_cell_; }
  /// World coordinates of the corner of cell (0, 0).
  Vec2 origin() const { return {min_cell_.x * resolution_, min_cell_.y * resolution_}; }
  int width() const { return static_cast<int>(cells_.cols()); }
  int height() const { return static_cast<int>(cells_.rows()); }
  const Grid<std::uint8_t>& cells() const { return cells_; }

  bool contains(const GridCell& c) const {
    return c.x >= min_cell_.x && c.y >= min_cell_.y && c.x < min_cell_.x + width() &&
           c.y < min_cell_.y + height();
  }
  CellState state(const GridCell& c) const {
    if (!contains(c)) return CellState::Unknown;
    return static_cast<CellState>(cells_(c.y - min_cell_.y, c.x - min_cell_.x));
  }
  CellState state_at(const Vec2& p) const { return state(cell_of(p, resolution_)); }

  /// Writes a known state; Unknown is rejected (cells never return to Unknown).
  void set(const GridCell& c, CellState s);

  std::size_t known_cells() const { return free_cells_ + occupied_cells_; }
  std::size_t free_cells() const { return free_cells_; }
  std::size_t occupied_cells() const { return occupied_cells_; }
  /// Bumped by every change of a cell state or of the storage window.
  std::uint64_t revision() const { return revision_; }

  /// Grows storage so that the inclusive lattice box [lo, hi] is addressable.
  void reserve_box(const GridCell& lo, const GridCell& hi);

  /// Builds a map from raw storage (used by snapshot IO).
  static OccupancyGrid from_cells(double resolution, GridCell min_cell, Grid<std::uint8_t> cells);

  friend bool operator==(const OccupancyGrid& a, const OccupancyGrid& b);

 private:
  double resolution_;
  GridCell min_cell_{0, 0};
  Grid<std::uint8_t> cells_;
  std::size_t free_cells_ = 0;
  std::size_t occupied_cells_ = 0;
  std::uint64_t revision_ = 0;
};

/// Marks every cell a ray enters before its hit distance Free and the cell it
/// hits Occupied (none for clipped rays). Occupied wins within one call; across
/// calls the latest write wins.
void integrate(OccupancyGrid& map, const Pose& est_pose, const DepthScan& scan,
               const SensorConfig& cfg);

/// Known area in m^2.
inline double coverage(const OccupancyGrid& map) {
  return static_cast<double>(map.known_cells()) * map.resolution() * map.resolution();
}

inline constexpr int kCropSize = 80;
inline constexpr double kCoarseCropResolution = 0.5;  // 40 m window
inline constexpr double kFineCropResolution = 0.05;   // 4 m window

/// Egocentric windows; row 0 is "ahead" of the agent, column 0 its left.
/// The agent sits in cell (kCropSize/2, kCropSize/2).
struct EgoCrops {
  Grid<std::uint8_t> coarse;  ///< CellState values
  Grid<std::uint8_t> fine;
};

EgoCrops ego_crops(const OccupancyGrid& map, const Pose& est_pose);

/// Rebuilds a map from scans rendered at the given (true) poses.
OccupancyGrid true_coverage_map(const Floorplan& plan, const WorldMode& mode,
                                std::span<const Pose> poses, const SensorConfig& cfg);

// Snapshots: plain PGM (P2), 0 = Unknown, 128 = Occupied, 255 = Free. The
// comment line records origin and resolution. Row 0 of the image is the
// lattice row with the smallest y.
void write_pgm(const OccupancyGrid& map, std::ostream& out);
void write_pgm(const OccupancyGrid& map, const std::filesystem::path& path);
OccupancyGrid read_pgm(std::istream& in);

}  // namespace explore
