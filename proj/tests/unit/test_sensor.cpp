#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "explore/sensor.hpp"

#include <string>

using namespace explore;
using explore::test::empty_room;
using explore::test::plan_from_rows;

namespace {

// One-cell-high corridor: the agent at x = 0.10 sees a door 0.5 m ahead and
// free space for more than max_range behind it.
Floorplan door_corridor() {
  std::string row = "#" + std::string(11, '.') + "D" + std::string(87, '.') + "#";
  std::string wall(row.size(), '#');
  return plan_from_rows({wall, row, wall});
}

int center_ray(const SensorConfig& cfg) { return cfg.n_rays / 2; }

}  // namespace

TEST_CASE("ray angles span the field of view") {
  const SensorConfig cfg;
  const Eigen::VectorXd a = ray_angles(cfg);
  REQUIRE(a.size() == 61);
  CHECK(a[0] == -30.0);
  CHECK(a[60] == 30.0);
  CHECK(a[30] == 0.0);
  for (int i = 1; i < 61; ++i) CHECK(a[i] - a[i - 1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(validate(SensorConfig{0.0, 61, 3.0}), ConfigError);
  CHECK_THROWS_AS(validate(SensorConfig{60.0, 1, 3.0}), ConfigError);
  CHECK_THROWS_AS(validate(SensorConfig{60.0, 61, -1.0}), ConfigError);
}

TEST_CASE("wall face exactly one meter ahead") {
  // Interior x in [0.05, 1.55); the wall column starts at x = 1.55.
  const Floorplan room = empty_room(30, 10);
  const SensorConfig cfg;
  const DepthScan s = render_scan(room, {}, Pose{0.55, 0.275, 0.0}, cfg);
  CHECK(std::abs(s.depths[center_ray(cfg)] - 1.0) <= 1e-9);
  CHECK_FALSE(s.clipped[center_ray(cfg)]);
}

TEST_CASE("door seen through or as a wall depending on the mode") {
  const Floorplan p = door_corridor();
  const SensorConfig cfg;
  const Pose pose{0.10, 0.075, 0.0};
  const DepthScan matched = render_scan(p, WorldMode{false}, pose, cfg);
  const DepthScan mismatch = render_scan(p, WorldMode{true}, pose, cfg);
  CHECK(matched.clipped[center_ray(cfg)]);
  CHECK(matched.depths[center_ray(cfg)] == cfg.max_range);
  CHECK_FALSE(mismatch.clipped[center_ray(cfg)]);
  CHECK(std::abs(mismatch.depths[center_ray(cfg)] - 0.5) <= 1e-9);
}

TEST_CASE("standing in a doorway still senses") {
  const Floorplan p = door_corridor();
  const SensorConfig cfg;
  // Inside the door cell (x in [0.60, 0.65)), looking along the corridor.
  const DepthScan s = render_scan(p, WorldMode{true}, Pose{0.62, 0.075, 0.0}, cfg);
  CHECK(s.clipped[center_ray(cfg)]);
  const DepthScan back = render_scan(p, WorldMode{true}, Pose{0.62, 0.075, 180.0}, cfg);
  CHECK(std::abs(back.depths[center_ray(cfg)] - 0.57) <= 1e-9);
}

TEST_CASE("rendering inside a wall is an invalid state") {
  const Floorplan room = empty_room(10, 10);
  CHECK_THROWS_AS(render_scan(room, {}, Pose{0.01, 0.3, 0.0}, {}), InvalidState);
  CHECK_THROWS_AS(render_scan(room, {}, Pose{-4.0, 0.3, 0.0}, {}), InvalidState);
}

TEST_CASE("depths agree with the sampling oracle") {
  GenParams gp;
  gp.target_area = 60.0;
  const Floorplan plan = generate_house(8, gp);
  const SensorConfig cfg;
  Rng rng(2);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    const Pose pose = sample_pose(plan, 0.0, rng);
    const Pose jittered{pose.x + 0.013, pose.y - 0.007, pose.theta + 0.37};
    if (plan.kind(cell_of(jittered.position(), plan.resolution())) == CellKind::Wall) continue;
    for (bool mm : {false, true}) {
      const DepthScan s = render_scan(plan, WorldMode{mm}, jittered, cfg);
      const Eigen::VectorXd angles = ray_angles(cfg);
      for (int r = 0; r < cfg.n_rays; ++r) {
        const double want = oracle::sampled_depth(plan, WorldMode{mm}, jittered.x, jittered.y,
                                                  deg2rad(jittered.theta + angles[r]), cfg.max_range);
        CHECK(std::abs(s.depths[r] - want) <= 0.002);
        CHECK(s.depths[r] > 0.0);
        CHECK(s.depths[r] <= cfg.max_range);
        ++checked;
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("scans are deterministic") {
  const Floorplan room = empty_room(40, 30);
  const Pose pose{0.77, 0.51, 123.4};
  const DepthScan a = render_scan(room, {}, pose, {});
  const DepthScan b = render_scan(room, {}, pose, {});
  CHECK(a.depths == b.depths);
  CHECK((a.clipped == b.clipped).all());
}
