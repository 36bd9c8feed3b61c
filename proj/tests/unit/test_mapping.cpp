#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "explore/mapping.hpp"

#include <sstream>

using namespace explore;
using explore::test::empty_room;

namespace {

std::size_t count_state(const Grid<std::uint8_t>& g, CellState s) {
  return static_cast<std::size_t>((g == static_cast<std::uint8_t>(s)).count());
}

}  // namespace

TEST_CASE("cell writes, counters and revision") {
  OccupancyGrid m;
  CHECK(m.known_cells() == 0);
  CHECK(m.state({3, -7}) == CellState::Unknown);
  const auto r0 = m.revision();
  m.set({3, -7}, CellState::Free);
  CHECK(m.revision() > r0);
  CHECK(m.state({3, -7}) == CellState::Free);
  CHECK(m.free_cells() == 1);
  const auto r1 = m.revision();
  m.set({3, -7}, CellState::Free);
  CHECK(m.revision() == r1);
  m.set({3, -7}, CellState::Occupied);
  CHECK(m.free_cells() == 0);
  CHECK(m.occupied_cells() == 1);
  m.set({-200, 400}, CellState::Free);
  CHECK(m.state({3, -7}) == CellState::Occupied);
  CHECK(m.known_cells() == 2);
  CHECK(coverage(m) == doctest::Approx(2 * 0.0025).epsilon(1e-12));
  CHECK_THROWS_AS(m.set({0, 0}, CellState::Unknown), InvalidState);
  CHECK_THROWS_AS(OccupancyGrid(0.0), ConfigError);
}

TEST_CASE("Occupied wins within one integrate, the latest write across calls") {
  // Two rays 1 degree either side of +x from the center of cell (0, 0). Both
  // stay in row 0 up to x = 1.05. The lower ray stops at the face of cell
  // (20, 0); the upper one runs on through it.
  const SensorConfig cfg{2.0, 2, 3.0};
  const Pose pose{0.025, 0.025, 0.0};
  DepthScan s;
  s.depths.resize(2);
  s.clipped.resize(2);
  s.depths[0] = (20 * 0.05 - 0.025) / std::cos(deg2rad(-1.0));
  s.clipped[0] = false;
  s.depths[1] = 2.0;
  s.clipped[1] = false;
  OccupancyGrid m;
  integrate(m, pose, s, cfg);
  CHECK(m.state({19, 0}) == CellState::Free);
  CHECK(m.state({20, 0}) == CellState::Occupied);
  CHECK(m.state({0, 0}) == CellState::Free);

  s.depths[0] = 3.0;
  s.clipped[0] = true;
  s.depths[1] = 3.0;
  s.clipped[1] = true;
  integrate(m, pose, s, cfg);
  CHECK(m.state({20, 0}) == CellState::Free);
}

TEST_CASE("with pose error the obstacle lands in the end point's cell") {
  // Wall face at x = 1.55. The scan is taken 1 cm short of where the agent
  // believes it is, so every end point falls 1 cm inside the wall column.
  const Floorplan room = empty_room(30, 10);
  const SensorConfig cfg;
  const DepthScan s = render_scan(room, {}, Pose{0.55, 0.275, 0.0}, cfg);
  OccupancyGrid m;
  integrate(m, Pose{0.56, 0.275, 0.0}, s, cfg);
  CHECK(m.state(cell_of({1.565, 0.275}, 0.05)) == CellState::Occupied);
  CHECK(m.state(cell_of({1.525, 0.275}, 0.05)) == CellState::Free);
  // A wall closer than the agent's own cell boundary never marks that cell.
  OccupancyGrid near;
  integrate(near, Pose{1.51, 0.275, 0.0}, render_scan(room, {}, Pose{1.53, 0.275, 0.0}, cfg), cfg);
  CHECK(near.state(cell_of({1.51, 0.275}, 0.05)) == CellState::Free);
}

TEST_CASE("clipped rays mark no Occupied cell") {
  const SensorConfig cfg{60.0, 61, 3.0};
  DepthScan s;
  s.depths = Eigen::VectorXd::Constant(61, 3.0);
  s.clipped = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(61, true);
  OccupancyGrid m;
  integrate(m, Pose{0.0, 0.0, 0.0}, s, cfg);
  CHECK(m.occupied_cells() == 0);
  CHECK(m.free_cells() > 0);
  DepthScan wrong;
  wrong.depths = Eigen::VectorXd::Constant(5, 1.0);
  wrong.clipped = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(5, false);
  CHECK_THROWS_AS(integrate(m, Pose{}, wrong, cfg), InvalidState);
}

TEST_CASE("noiseless scans classify every cell correctly") {
  GenParams gp;
  gp.target_area = 60.0;
  const Floorplan plan = generate_house(5, gp);
  const SensorConfig cfg;
  Rng rng(9);
  for (bool mm : {false, true}) {
    OccupancyGrid m;
    std::set<GridCell> origins;
    std::size_t prev = 0;
    for (int i = 0; i < 30; ++i) {
      const Pose p = sample_pose(plan, 0.25, rng);
      origins.insert(cell_of(p.position(), plan.resolution()));
      integrate(m, p, render_scan(plan, WorldMode{mm}, p, cfg), cfg);
      CHECK(m.known_cells() >= prev);
      prev = m.known_cells();
    }
    CHECK(oracle::misclassified_cells(m, plan, WorldMode{mm}, origins) == 0);
  }
}

TEST_CASE("true_coverage_map equals incremental integration") {
  const Floorplan room = empty_room(40, 40);
  const std::vector<Pose> poses{{0.5, 0.5, 0.0}, {1.0, 1.5, 90.0}, {1.7, 0.3, 200.0}};
  const SensorConfig cfg;
  OccupancyGrid m;
  for (const Pose& p : poses) integrate(m, p, render_scan(room, {}, p, cfg), cfg);
  CHECK(true_coverage_map(room, {}, poses, cfg) == m);
}

TEST_CASE("ego crops: fresh map, placement, 90 degree equivariance") {
  OccupancyGrid fresh;
  const EgoCrops f = ego_crops(fresh, Pose{1.0, 2.0, 33.0});
  CHECK(f.fine.rows() == kCropSize);
  CHECK(f.coarse.cols() == kCropSize);
  CHECK(count_state(f.fine, CellState::Unknown) == kCropSize * kCropSize);
  CHECK(count_state(f.coarse, CellState::Unknown) == kCropSize * kCropSize);

  // An Occupied cell 1 m straight ahead lands 20 fine cells above the center.
  for (double theta : {0.0, 90.0, 180.0, 270.0}) {
    OccupancyGrid m;
    const Pose pose{1.025, 1.025, theta};
    const Vec2 ahead = pose.position() + pose.heading();
    m.set(cell_of(ahead, 0.05), CellState::Occupied);
    const EgoCrops c = ego_crops(m, pose);
    CHECK(c.fine(20, 40) == static_cast<std::uint8_t>(CellState::Occupied));
    CHECK(count_state(c.fine, CellState::Occupied) == 1);
  }

  // Random map; rotate it a quarter turn about the agent and turn the agent
  // with it. Fine samples sit on cell centers when the agent does, coarse
  // samples when the agent stands on a lattice corner, so each crop is
  // checked with the pivot where its samples are unambiguous.
  Rng rng(4);
  OccupancyGrid base;
  for (int y = -60; y < 60; ++y)
    for (int x = -60; x < 60; ++x) {
      const auto v = rng() % 3;
      if (v) base.set({x, y}, v == 1 ? CellState::Free : CellState::Occupied);
    }
  auto rotate = [&](bool about_center) {
    OccupancyGrid r;
    for (int y = -60; y < 60; ++y)
      for (int x = -60; x < 60; ++x) {
        const CellState s = base.state({x, y});
        if (s == CellState::Unknown) continue;
        r.set(about_center ? GridCell{-y, x} : GridCell{-y - 1, x}, s);
      }
    return r;
  };
  const OccupancyGrid rc = rotate(true), rk = rotate(false);
  const EgoCrops a = ego_crops(base, Pose{0.025, 0.025, 0.0});
  const EgoCrops b = ego_crops(rc, Pose{0.025, 0.025, 90.0});
  CHECK((a.fine == b.fine).all());
  const EgoCrops c = ego_crops(base, Pose{0.0, 0.0, 0.0});
  const EgoCrops d = ego_crops(rk, Pose{0.0, 0.0, 90.0});
  CHECK((c.coarse == d.coarse).all());
}

TEST_CASE("PGM snapshot round trip") {
  OccupancyGrid m;
  m.set({-3, 2}, CellState::Free);
  m.set({5, 9}, CellState::Occupied);
  std::stringstream ss;
  write_pgm(m, ss);
  const std::string text = ss.str();
  CHECK(text.rfind("P2\n#", 0) == 0);
  const OccupancyGrid back = read_pgm(ss);
  CHECK(back == m);
  CHECK(back.known_cells() == 2);
  std::istringstream bad("P5\n");
  CHECK_THROWS_AS(read_pgm(bad), ParseError);
}
