#pragma once

#include "explore/core.hpp"
#include "explore/world.hpp"

#include <Eigen/Core>

namespace explore {

struct SensorConfig {
  double fov = 60.0;       ///< degrees
  int n_rays = 61;
  double max_range = 3.0;  ///< m
};

void validate(const SensorConfig& cfg);

struct DepthScan {
  Eigen::VectorXd depths;
  Eigen::Array<bool, Eigen::Dynamic, 1> clipped;

  Eigen::Index size() const { return depths.size(); }
};

/// Evenly spaced ray offsets from the heading, spanning [-fov/2, +fov/2]
/// inclusive. Ray 0 is the rightmost (most clockwise) ray.
Eigen::VectorXd ray_angles(const SensorConfig& cfg);

/// World-frame unit direction of a ray at `offset_deg` from the pose heading.
/// Shared by rendering and map integration so both trace identical rays.
inline Vec2 ray_direction(const Pose& pose, double offset_deg) {
  const double a = deg2rad(pose.theta + offset_deg);
  return {std::cos(a), std::sin(a)};
}

/// Distance from `origin` along `dir` to the first cell boundary of an opaque
/// cell, or max_range if none is entered within range. A Door cell containing
/// the origin is skipped so an agent standing in a doorway can still sense.
struct RayHit {
  double depth;
  bool clipped;
};
RayHit cast_ray(const Floorplan& plan, const WorldMode& mode, const Vec2& origin,
                const Vec2& dir, double max_range);

/// Throws InvalidState if the pose lies in a Wall cell or outside the world.
DepthScan render_scan(const Floorplan& plan, const WorldMode& mode, const Pose& true_pose,
                      const SensorConfig& cfg);

}  // namespace explore
