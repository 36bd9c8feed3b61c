#include "explore/sensor.hpp"

#include "explore/raycast.hpp"

namespace explore {

void validate(const SensorConfig& cfg) {
  if (!(cfg.fov > 0.0 && cfg.fov <= 360.0)) throw ConfigError("fov must be in (0, 360]");
  if (cfg.n_rays < 2) throw ConfigError("n_rays must be >= 2");
  if (!(cfg.max_range > 0.0)) throw ConfigError("max_range must be positive");
}

Eigen::VectorXd ray_angles(const SensorConfig& cfg) {
  validate(cfg);
  return Eigen::VectorXd::LinSpaced(cfg.n_rays, -cfg.fov / 2.0, cfg.fov / 2.0);
}

RayHit cast_ray(const Floorplan& plan, const WorldMode& mode, const Vec2& origin,
                const Vec2& dir, double max_range) {
  RayHit hit{max_range, true};
  bool first = true;
  traverse_grid(origin, dir, plan.resolution(), max_range, [&](const GridCell& c, double t) {
    if (first) {
      first = false;
      return true;
    }
    if (plan.opaque(c, mode)) {
      hit = {t, false};
      return false;
    }
    return true;
  });
  return hit;
}

DepthScan render_scan(const Floorplan& plan, const WorldMode& mode, const Pose& true_pose,
                      const SensorConfig& cfg) {
  const Vec2 origin = true_pose.position();
  if (plan.kind(cell_of(origin, plan.resolution())) == CellKind::Wall)
    throw InvalidState("sensor pose inside an opaque cell");
  const Eigen::VectorXd angles = ray_angles(cfg);
  DepthScan scan;
  scan.depths.resize(cfg.n_rays);
  scan.clipped.resize(cfg.n_rays);
  for (int i = 0; i < cfg.n_rays; ++i) {
    const RayHit h = cast_ray(plan, mode, origin, ray_direction(true_pose, angles[i]), cfg.max_range);
    scan.depths[i] = h.depth;
    scan.clipped[i] = h.clipped;
  }
  return scan;
}

}  // namespace explore
