#pragma once

#include "gplan/kernel/configuration.hpp"
#include "gplan/sensors/ray_cast.hpp"
#include "gplan/voxmap/voxel_map.hpp"

#include <stdexcept>
#include <vector>

namespace gplan {

class SensorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DepthSensorModel {
  double fov_h = 2.0 * std::numbers::pi;
  double fov_v = std::numbers::pi / 2.0;
  double max_range = 5.0;
  double ray_resolution = deg2rad(2.0);

  /// Horizontal FoV covers the full circle; yaw then has no effect.
  bool omnidirectional() const { return fov_h >= 2.0 * std::numbers::pi - 1e-9; }
  void validate() const;
};

struct CameraSensorModel {
  double fov_h = deg2rad(90.0);
  double fov_v = deg2rad(60.0);
  double min_range = 0.5;
  double max_range = 2.5;
  bool pitch_actuated = false;
  double mount_pitch = 0.0;  // used when not actuated; positive looks up
  double pitch_min = -std::numbers::pi / 2.0;
  double pitch_max = std::numbers::pi / 2.0;

  void validate() const;
};

/// Fixed ray pattern of a depth sensor, in the sensor frame (yaw 0).
class RayFan {
 public:
  explicit RayFan(const DepthSensorModel& model);

  const DepthSensorModel& model() const { return model_; }
  std::size_t size() const { return dirs_.size(); }
  /// Ray directions in the world frame for the given yaw (ignored when omnidirectional).
  std::vector<Vec3> directions(double yaw) const;

  template <class Fn>
  void for_each_direction(double yaw, Fn&& fn) const {
    if (model_.omnidirectional() || yaw == 0.0) {
      for (const auto& d : dirs_) fn(d);
      return;
    }
    const double c = std::cos(yaw), s = std::sin(yaw);
    for (const auto& d : dirs_) fn(Vec3(c * d.x() - s * d.y(), s * d.x() + c * d.y(), d.z()));
  }

 private:
  DepthSensorModel model_;
  std::vector<Vec3> dirs_;
};

/// Number of distinct Unknown voxels that terminate a sensor ray cast from ξ.
std::size_t gamma_ve(const VoxelMap& map, const Configuration& xi, const RayFan& fan);
std::size_t gamma_ve(const VoxelMap& map, const Configuration& xi, const DepthSensorModel& d);

/// Keys of the distinct Unknown voxels counted by gamma_ve, sorted by index.
std::vector<std::size_t> gamma_ve_voxels(const VoxelMap& map, const Configuration& xi, const RayFan& fan);

/// Unit viewing direction for a yaw/pitch pair.
Vec3 view_direction(double yaw, double pitch);

/// True when `offset` (target minus camera position) lies inside the camera's
/// rectangular frustum for the given yaw/pitch, ignoring range.
bool in_frustum(const Vec3& offset, double yaw, double pitch, const CameraSensorModel& c);

/// Targets within [min_range, max_range] of p whose center is reached by a ray
/// crossing only Free voxels. Independent of orientation.
std::vector<VoxelKey> line_of_sight_targets(const VoxelMap& map, const Vec3& p, const CameraSensorModel& c,
                                            const std::vector<VoxelKey>& targets);

/// Camera pitch for a configuration: ξ's pitch when present and actuated, the mount pitch otherwise.
double camera_pitch(const Configuration& xi, const CameraSensorModel& c);

/// Subset of targets observed by the camera at ξ.
std::vector<VoxelKey> vis_surface(const VoxelMap& map, const Configuration& xi, const CameraSensorModel& c,
                                  const std::vector<VoxelKey>& targets);

struct OrientedView {
  double yaw = 0.0;
  double pitch = 0.0;
  std::vector<VoxelKey> visible;  // sorted
};

/// Yaw/pitch grid entries with a non-empty visible set. Yaws are 2πk/yaw_count
/// (wrapped); pitches span [pitch_min, pitch_max] evenly and always include the
/// mount pitch. A passive camera uses the mount pitch only.
std::vector<OrientedView> orientation_set(const VoxelMap& map, const Vec3& p_v, const CameraSensorModel& c,
                                          const std::vector<VoxelKey>& shell_targets, int yaw_count = 16,
                                          int pitch_count = 5);

/// Pitches tried by orientation_set.
std::vector<double> pitch_grid(const CameraSensorModel& c, int pitch_count);

}  // namespace gplan
