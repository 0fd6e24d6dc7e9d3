#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gplan {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Vec3i = Eigen::Vector3i;

/// Axis-aligned box given by its min and max corners.
struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  static Aabb centered(const Vec3& center, const Vec3& size) {
    return {center - 0.5 * size, center + 0.5 * size};
  }

  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 size() const { return max - min; }
  bool empty() const { return (max.array() < min.array()).any(); }

  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }

  Aabb intersect(const Aabb& o) const { return {min.cwiseMax(o.min), max.cwiseMin(o.max)}; }

  /// Positive-volume overlap test (touching faces do not count).
  bool overlaps(const Aabb& o) const {
    return (min.array() < o.max.array()).all() && (o.min.array() < max.array()).all();
  }

  bool operator==(const Aabb& o) const { return min == o.min && max == o.max; }
};

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

inline double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

/// Lexicographic ordering on positions; used to canonicalize segment direction.
inline bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  if (a.y() != b.y()) return a.y() < b.y();
  return a.z() < b.z();
}

}  // namespace gplan
