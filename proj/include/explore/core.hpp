#pragma once

#include <Eigen/Core>

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace explore {

/// Row-major dense grid, indexed (row = y, col = x).
template <typename T>
using Grid = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Vec2 = Eigen::Vector2d;

/// Random stream used by every stochastic component. One stream per consumer.
using Rng = std::mt19937_64;

// Errors ------------------------------------------------------------------

struct ExploreError : std::runtime_error {
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "ExploreError"; }
};

#define EXPLORE_DEFINE_ERROR(Name)                                  \
  struct Name : ExploreError {                                      \
    using ExploreError::ExploreError;                               \
    const char* kind() const noexcept override { return #Name; }    \
  }

EXPLORE_DEFINE_ERROR(ParseError);
EXPLORE_DEFINE_ERROR(ValidationError);
EXPLORE_DEFINE_ERROR(GenerationError);
EXPLORE_DEFINE_ERROR(InvalidState);
EXPLORE_DEFINE_ERROR(NoPathError);
EXPLORE_DEFINE_ERROR(InvalidStartError);
EXPLORE_DEFINE_ERROR(EmptyInputError);
EXPLORE_DEFINE_ERROR(EmptyLogError);
EXPLORE_DEFINE_ERROR(NegativeCoverageError);
EXPLORE_DEFINE_ERROR(ConfigError);

#undef EXPLORE_DEFINE_ERROR

// Lattice -----------------------------------------------------------------

/// Cell on the world-anchored lattice: cell (x, y) covers
/// [x*res, (x+1)*res) x [y*res, (y+1)*res). Ordered lexicographically by (x, y).
struct GridCell {
  int x = 0;
  int y = 0;
  friend constexpr auto operator<=>(const GridCell&, const GridCell&) = default;
};

inline GridCell cell_of(const Vec2& p, double resolution) {
  return {static_cast<int>(std::floor(p.x() / resolution)),
          static_cast<int>(std::floor(p.y() / resolution))};
}

inline Vec2 cell_center(const GridCell& c, double resolution) {
  return {(c.x + 0.5) * resolution, (c.y + 0.5) * resolution};
}

// Angles ------------------------------------------------------------------

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Wraps to [0, 360).
inline double normalize_degrees(double d) {
  double r = std::fmod(d, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;
  return r;
}

/// Wraps to (-180, 180].
inline double wrap_degrees_signed(double d) {
  double r = normalize_degrees(d);
  return r > 180.0 ? r - 360.0 : r;
}

// Pose --------------------------------------------------------------------

/// Planar pose; heading in degrees, counter-clockwise from +x.
template <typename Scalar>
struct Pose_ {
  Scalar x{0};
  Scalar y{0};
  Scalar theta{0};

  Eigen::Matrix<Scalar, 2, 1> position() const { return {x, y}; }
  /// Unit vector along the heading.
  Eigen::Matrix<Scalar, 2, 1> heading() const {
    const Scalar r = static_cast<Scalar>(deg2rad(theta));
    return {std::cos(r), std::sin(r)};
  }
  /// Unit vector pointing to the agent's left.
  Eigen::Matrix<Scalar, 2, 1> left() const {
    const Scalar r = static_cast<Scalar>(deg2rad(theta));
    return {-std::sin(r), std::cos(r)};
  }

  friend bool operator==(const Pose_&, const Pose_&) = default;
};

using Pose = Pose_<double>;

inline double position_distance(const Pose& a, const Pose& b) {
  return (a.position() - b.position()).norm();
}

// Seeds -------------------------------------------------------------------

/// splitmix64 finalizer; used to derive independent sub-stream seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

template <typename... Ts>
std::uint64_t derive_seed(std::uint64_t master, Ts... parts) {
  std::uint64_t s = mix_seed(master);
  ((s = mix_seed(s ^ static_cast<std::uint64_t>(parts))), ...);
  return s;
}

}  // namespace explore

template <>
struct std::hash<explore::GridCell> {
  std::size_t operator()(const explore::GridCell& c) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.x)) << 32) |
                                      static_cast<std::uint32_t>(c.y));
  }
};
