#pragma once

#include "gplan/geometry.hpp"
#include "gplan/heightmap/heightfield.hpp"

#include <optional>
#include <vector>

namespace gplan {

struct World;

struct FootprintSpec {
  double half_length = 0.0;
  double half_width = 0.0;
  double clearance = 0.0;  // h_0: body height above the terrain
};

enum class GroundRejection { None, NoElevation, SlopeExceeded };

const char* to_string(GroundRejection r);

struct GroundProjection {
  std::optional<double> z;  // set on success: terrain elevation + clearance
  GroundRejection rejection = GroundRejection::None;

  bool ok() const { return z.has_value(); }
};

/// Robot-centered 2.5D elevation window. Cells are aligned to a global grid of
/// pitch `resolution`, so recentering only shifts which cells are held and
/// never resamples values.
class ElevationMap {
 public:
  ElevationMap(const Vec2& window_size, double resolution, const Vec2& center = Vec2::Zero());

  double resolution() const { return resolution_; }
  Vec2 window_size() const { return Vec2(nx_, ny_) * resolution_; }
  int cells_x() const { return nx_; }
  int cells_y() const { return ny_; }
  /// Center of the current window (snapped to cell boundaries).
  Vec2 center() const;

  void recenter(const Vec2& xy);
  bool in_window(double x, double y) const;

  /// Elevation of the cell containing (x, y); nullopt outside the window or when unobserved.
  std::optional<double> elevation_at(double x, double y) const;
  /// Writes the cell containing (x, y); ignored outside the window.
  void set_elevation(double x, double y, double z);
  std::size_t valid_count() const;

  /// Global integer index of the cell containing (x, y).
  Eigen::Vector2i cell_of(double x, double y) const;
  Vec2 cell_center(const Eigen::Vector2i& cell) const;
  std::optional<double> cell_elevation(const Eigen::Vector2i& cell) const;

 private:
  int nx_;
  int ny_;
  double resolution_;
  Eigen::Vector2i offset_;  // global index of the window's first cell
  std::vector<double> cells_;  // NaN marks invalid
};

/// Recenters on robot_xy and copies ground truth into every cell whose center lies
/// within sensor_radius, plus the robot's own cell.
void update_from_heightfield(ElevationMap& map, const Heightfield& terrain, const Vec2& robot_xy,
                             double sensor_radius);
void update_from_heightfield(ElevationMap& map, const World& world, const Vec2& robot_xy, double sensor_radius);

/// Projects a footprint centered at xy onto the terrain. Slope is the absolute
/// inclination between the center cell and each of the four corner cells.
GroundProjection project_to_ground(const ElevationMap& map, const Vec2& xy, const FootprintSpec& footprint,
                                   double max_slope);

/// Samples a->b every `step` meters and checks that every sample has terrain and
/// that consecutive distinct cells differ by at most max_slope.
bool slope_ok_between(const ElevationMap& map, const Vec2& a, const Vec2& b, double max_slope, double step);

/// Terrain cells visited by a walk from a to b with spacing `step`, in walking
/// order, with consecutive duplicates removed. Endpoints are canonicalized so the
/// sequence for (b, a) is the reverse of (a, b).
std::vector<Eigen::Vector2i> cells_along(const ElevationMap& map, const Vec2& a, const Vec2& b, double step);

}  // namespace gplan
