#include "gplan/heightmap/heightfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gplan {

Heightfield::Heightfield(const Vec2& origin, int nx, int ny, double resolution, std::vector<double> values)
    : origin_(origin), nx_(nx), ny_(ny), resolution_(resolution), values_(std::move(values)) {
  if (nx < 1 || ny < 1 || !(resolution > 0.0))
    throw std::invalid_argument("heightfield needs nx, ny >= 1 and resolution > 0");
  if (values_.size() != static_cast<std::size_t>(nx) * ny)
    throw std::invalid_argument("heightfield value count does not match nx * ny");
}

double Heightfield::node(int i, int j) const {
  i = std::clamp(i, 0, nx_ - 1);
  j = std::clamp(j, 0, ny_ - 1);
  return values_[static_cast<std::size_t>(j) * nx_ + i];
}

double Heightfield::height(double x, double y) const {
  const double u = std::clamp((x - origin_.x()) / resolution_, 0.0, static_cast<double>(nx_ - 1));
  const double v = std::clamp((y - origin_.y()) / resolution_, 0.0, static_cast<double>(ny_ - 1));
  const int i = std::min(static_cast<int>(std::floor(u)), std::max(0, nx_ - 2));
  const int j = std::min(static_cast<int>(std::floor(v)), std::max(0, ny_ - 2));
  const double fu = nx_ > 1 ? u - i : 0.0;
  const double fv = ny_ > 1 ? v - j : 0.0;
  const double z00 = node(i, j), z10 = node(i + 1, j), z01 = node(i, j + 1), z11 = node(i + 1, j + 1);
  return (1 - fu) * (1 - fv) * z00 + fu * (1 - fv) * z10 + (1 - fu) * fv * z01 + fu * fv * z11;
}

double Heightfield::max_height(const Vec2& lo, const Vec2& hi) const {
  // Grid lines split the query into sub-rectangles, each inside one bilinear
  // patch, so the max sits at a query corner, an interior node, or a point where
  // a grid line crosses the query boundary.
  double best = -std::numeric_limits<double>::infinity();
  for (double x : {lo.x(), hi.x()})
    for (double y : {lo.y(), hi.y()}) best = std::max(best, height(x, y));
  const int i0 = static_cast<int>(std::ceil((lo.x() - origin_.x()) / resolution_));
  const int i1 = static_cast<int>(std::floor((hi.x() - origin_.x()) / resolution_));
  const int j0 = static_cast<int>(std::ceil((lo.y() - origin_.y()) / resolution_));
  const int j1 = static_cast<int>(std::floor((hi.y() - origin_.y()) / resolution_));
  for (int j = std::max(j0, 0); j <= std::min(j1, ny_ - 1); ++j)
    for (int i = std::max(i0, 0); i <= std::min(i1, nx_ - 1); ++i) best = std::max(best, node(i, j));
  for (int i = std::max(i0, 0); i <= std::min(i1, nx_ - 1); ++i) {
    const double x = origin_.x() + i * resolution_;
    best = std::max({best, height(x, lo.y()), height(x, hi.y())});
  }
  for (int j = std::max(j0, 0); j <= std::min(j1, ny_ - 1); ++j) {
    const double y = origin_.y() + j * resolution_;
    best = std::max({best, height(lo.x(), y), height(hi.x(), y)});
  }
  return best;
}

}  // namespace gplan
