#include "gplan/heightmap/elevation_map.hpp"

#include "gplan/worldsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gplan {

namespace {

constexpr double kInvalid = std::numeric_limits<double>::quiet_NaN();

double incline(const ElevationMap& map, const Eigen::Vector2i& a, double za, const Eigen::Vector2i& b, double zb) {
  if (a == b) return 0.0;
  const double run = (map.cell_center(a) - map.cell_center(b)).norm();
  return std::atan(std::abs(zb - za) / run);
}

}  // namespace

const char* to_string(GroundRejection r) {
  switch (r) {
    case GroundRejection::None:
      return "none";
    case GroundRejection::NoElevation:
      return "no-elevation";
    case GroundRejection::SlopeExceeded:
      return "slope-exceeded";
  }
  return "?";
}

ElevationMap::ElevationMap(const Vec2& window_size, double resolution, const Vec2& center)
    : resolution_(resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("elevation resolution must be positive");
  nx_ = std::max(1, static_cast<int>(std::lround(window_size.x() / resolution)));
  ny_ = std::max(1, static_cast<int>(std::lround(window_size.y() / resolution)));
  cells_.assign(static_cast<std::size_t>(nx_) * ny_, kInvalid);
  offset_ = cell_of(center.x(), center.y()) - Eigen::Vector2i(nx_ / 2, ny_ / 2);
}

Vec2 ElevationMap::center() const {
  return (offset_.cast<double>() + Vec2(nx_ / 2, ny_ / 2)) * resolution_;
}

Eigen::Vector2i ElevationMap::cell_of(double x, double y) const {
  return {static_cast<int>(std::floor(x / resolution_)), static_cast<int>(std::floor(y / resolution_))};
}

Vec2 ElevationMap::cell_center(const Eigen::Vector2i& cell) const {
  return (cell.cast<double>() + Vec2::Constant(0.5)) * resolution_;
}

void ElevationMap::recenter(const Vec2& xy) {
  const Eigen::Vector2i new_offset = cell_of(xy.x(), xy.y()) - Eigen::Vector2i(nx_ / 2, ny_ / 2);
  if (new_offset == offset_) return;
  std::vector<double> moved(cells_.size(), kInvalid);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      const Eigen::Vector2i global = new_offset + Eigen::Vector2i(i, j);
      const Eigen::Vector2i old_local = global - offset_;
      if (old_local.x() < 0 || old_local.y() < 0 || old_local.x() >= nx_ || old_local.y() >= ny_) continue;
      moved[static_cast<std::size_t>(j) * nx_ + i] =
          cells_[static_cast<std::size_t>(old_local.y()) * nx_ + old_local.x()];
    }
  cells_ = std::move(moved);
  offset_ = new_offset;
}

bool ElevationMap::in_window(double x, double y) const {
  const Eigen::Vector2i local = cell_of(x, y) - offset_;
  return local.x() >= 0 && local.y() >= 0 && local.x() < nx_ && local.y() < ny_;
}

std::optional<double> ElevationMap::cell_elevation(const Eigen::Vector2i& cell) const {
  const Eigen::Vector2i local = cell - offset_;
  if (local.x() < 0 || local.y() < 0 || local.x() >= nx_ || local.y() >= ny_) return std::nullopt;
  const double z = cells_[static_cast<std::size_t>(local.y()) * nx_ + local.x()];
  if (std::isnan(z)) return std::nullopt;
  return z;
}

std::optional<double> ElevationMap::elevation_at(double x, double y) const {
  return cell_elevation(cell_of(x, y));
}

void ElevationMap::set_elevation(double x, double y, double z) {
  const Eigen::Vector2i local = cell_of(x, y) - offset_;
  if (local.x() < 0 || local.y() < 0 || local.x() >= nx_ || local.y() >= ny_) return;
  cells_[static_cast<std::size_t>(local.y()) * nx_ + local.x()] = z;
}

std::size_t ElevationMap::valid_count() const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](double z) { return !std::isnan(z); }));
}

void update_from_heightfield(ElevationMap& map, const Heightfield& terrain, const Vec2& robot_xy,
                             double sensor_radius) {
  map.recenter(robot_xy);
  const double r = map.resolution();
  const Eigen::Vector2i own = map.cell_of(robot_xy.x(), robot_xy.y());
  const int reach = static_cast<int>(std::ceil(sensor_radius / r)) + 1;
  for (int dj = -reach; dj <= reach; ++dj)
    for (int di = -reach; di <= reach; ++di) {
      const Eigen::Vector2i cell = own + Eigen::Vector2i(di, dj);
      const Vec2 c = map.cell_center(cell);
      if (cell != own && (c - robot_xy).norm() > sensor_radius) continue;
      map.set_elevation(c.x(), c.y(), terrain.height(c.x(), c.y()));
    }
}

void update_from_heightfield(ElevationMap& map, const World& world, const Vec2& robot_xy, double sensor_radius) {
  if (!world.heightfield) {
    map.recenter(robot_xy);
    return;
  }
  update_from_heightfield(map, *world.heightfield, robot_xy, sensor_radius);
}

GroundProjection project_to_ground(const ElevationMap& map, const Vec2& xy, const FootprintSpec& footprint,
                                   double max_slope) {
  const Eigen::Vector2i center_cell = map.cell_of(xy.x(), xy.y());
  const auto z0 = map.cell_elevation(center_cell);
  if (!z0) return {std::nullopt, GroundRejection::NoElevation};
  bool slope_exceeded = false;
  for (double sx : {-1.0, 1.0})
    for (double sy : {-1.0, 1.0}) {
      const Vec2 corner = xy + Vec2(sx * footprint.half_length, sy * footprint.half_width);
      const Eigen::Vector2i cell = map.cell_of(corner.x(), corner.y());
      const auto zc = map.cell_elevation(cell);
      if (!zc) return {std::nullopt, GroundRejection::NoElevation};
      if (incline(map, center_cell, *z0, cell, *zc) > max_slope) slope_exceeded = true;
    }
  if (slope_exceeded) return {std::nullopt, GroundRejection::SlopeExceeded};
  return {*z0 + footprint.clearance, GroundRejection::None};
}

std::vector<Eigen::Vector2i> cells_along(const ElevationMap& map, const Vec2& a, const Vec2& b, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  const bool swap = b.x() < a.x() || (b.x() == a.x() && b.y() < a.y());
  const Vec2& from = swap ? b : a;
  const Vec2& to = swap ? a : b;
  const Vec2 delta = to - from;
  const int n = std::max(1, static_cast<int>(std::ceil(delta.norm() / step)));
  std::vector<Eigen::Vector2i> cells;
  for (int s = 0; s <= n; ++s) {
    const Vec2 p = from + delta * (static_cast<double>(s) / n);
    const Eigen::Vector2i c = map.cell_of(p.x(), p.y());
    if (cells.empty() || cells.back() != c) cells.push_back(c);
  }
  if (swap) std::reverse(cells.begin(), cells.end());
  return cells;
}

bool slope_ok_between(const ElevationMap& map, const Vec2& a, const Vec2& b, double max_slope, double step) {
  const auto cells = cells_along(map, a, b, step);
  std::optional<double> prev;
  for (std::size_t n = 0; n < cells.size(); ++n) {
    const auto z = map.cell_elevation(cells[n]);
    if (!z) return false;
    if (prev && incline(map, cells[n - 1], *prev, cells[n], *z) > max_slope) return false;
    prev = z;
  }
  return true;
}

}  // namespace gplan
