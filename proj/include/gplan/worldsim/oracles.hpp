#pragma once

#include "gplan/embodiment/embodiment.hpp"
#include "gplan/sensors/sensors.hpp"
#include "gplan/worldsim/world.hpp"

#include <optional>

namespace gplan {

struct OracleOptions {
  double resolution = 0.2;      // r_V of the ground-truth grid
  double grid_step = 0.0;       // configuration grid step; 0 means 2·r_V
  std::size_t voxel_limit = 200000;
  int yaw_count = 8;            // depth sensors with limited FoV
  int camera_yaw_count = 16;
  int camera_pitch_count = 5;
  /// Restrict configurations to the free-space component containing this point.
  std::optional<Vec3> reachable_from;
  /// Surface oracle: candidate voxels (all Occupied voxels when unset).
  std::optional<Aabb> surface_region;
};

/// Admissible configuration positions on the oracle grid (projected for ground robots).
std::vector<Vec3> oracle_positions(const World& world, const VoxelMap& truth, const EmbodimentSpec& spec,
                                   const OracleOptions& options);

/// Voxels (Free or Occupied) that no admissible grid configuration observes with
/// the depth sensor. Sorted. Throws WorldError("oracle limit exceeded") above
/// options.voxel_limit voxels.
std::vector<VoxelKey> residual_volume_oracle(const World& world, const EmbodimentSpec& spec,
                                             const DepthSensorModel& depth, const OracleOptions& options = {});

/// Occupied voxels that no admissible grid configuration sees with the camera
/// over its yaw/pitch grid. Sorted.
std::vector<VoxelKey> residual_surface_oracle(const World& world, const EmbodimentSpec& spec,
                                              const CameraSensorModel& camera, const OracleOptions& options = {});

/// Free voxels 6-connected to the voxel containing p in the ground truth (empty if p is not free).
std::vector<char> free_component(const VoxelMap& truth, const Vec3& p);

}  // namespace gplan
