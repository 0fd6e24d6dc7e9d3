#pragma once

#include "gplan/geometry.hpp"

#include <vector>

namespace gplan {

/// Gridded terrain z(x, y), bilinearly interpolated between nodes. Node (i, j)
/// sits at origin + (i, j) * resolution; values are stored row-major (j major).
/// Queries outside the grid clamp to the border.
class Heightfield {
 public:
  Heightfield() = default;
  Heightfield(const Vec2& origin, int nx, int ny, double resolution, std::vector<double> values);

  double height(double x, double y) const;
  /// Max of z over the closed rectangle [lo, hi].
  double max_height(const Vec2& lo, const Vec2& hi) const;

  const Vec2& origin() const { return origin_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double resolution() const { return resolution_; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const Heightfield&) const = default;

 private:
  double node(int i, int j) const;

  Vec2 origin_ = Vec2::Zero();
  int nx_ = 0;
  int ny_ = 0;
  double resolution_ = 1.0;
  std::vector<double> values_;
};

}  // namespace gplan
