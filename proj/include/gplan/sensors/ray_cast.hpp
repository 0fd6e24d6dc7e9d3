#pragma once

#include "gplan/voxmap/voxel_map.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace gplan {

enum class RayOutcome { Hit, UnknownBlocked, Miss };

struct RayResult {
  RayOutcome outcome = RayOutcome::Miss;
  VoxelKey stop{};                    // the Occupied / Unknown voxel that ended the ray
  std::vector<VoxelKey> traversed;    // Free voxels crossed, in order
};

/// Voxel traversal (Amanatides-Woo) from origin along unit dir. Visits every voxel
/// whose entry distance is below max_range, stopping at the first non-Free one.
RayResult ray_cast(const VoxelMap& map, const Vec3& origin, const Vec3& dir, double max_range);

/// Allocation-free variant: calls on_free(index) for each Free voxel crossed and
/// stores the index of the terminating voxel in *stop (when not Miss).
template <class OnFree>
RayOutcome trace_ray(const VoxelMap& map, const Vec3& origin, const Vec3& dir, double max_range, OnFree&& on_free,
                     std::size_t* stop = nullptr) {
  const double res = map.resolution();
  const Vec3 g = (origin - map.origin()) / res;
  const Vec3i& dims = map.dims();
  int cell[3];
  int step[3];
  double t_max[3];
  double t_delta[3];
  for (int a = 0; a < 3; ++a) {
    cell[a] = static_cast<int>(std::floor(g[a]));
    if (cell[a] < 0 || cell[a] >= dims[a]) return RayOutcome::Miss;
    if (dir[a] > 0.0) {
      step[a] = 1;
      t_delta[a] = 1.0 / dir[a];
      t_max[a] = (cell[a] + 1 - g[a]) * t_delta[a];
    } else if (dir[a] < 0.0) {
      step[a] = -1;
      t_delta[a] = -1.0 / dir[a];
      t_max[a] = (g[a] - cell[a]) * t_delta[a];
    } else {
      step[a] = 0;
      t_delta[a] = std::numeric_limits<double>::infinity();
      t_max[a] = std::numeric_limits<double>::infinity();
    }
  }
  const double t_end = max_range / res;
  const std::size_t sx = 1, sy = static_cast<std::size_t>(dims.x()), sz = sy * static_cast<std::size_t>(dims.y());
  const std::size_t strides[3] = {sx, sy, sz};
  std::size_t idx = map.index_of({cell[0], cell[1], cell[2]});
  while (true) {
    const VoxelState s = map.state_unchecked(idx);
    if (s != VoxelState::Free) {
      if (stop) *stop = idx;
      return s == VoxelState::Occupied ? RayOutcome::Hit : RayOutcome::UnknownBlocked;
    }
    on_free(idx);
    int a = 0;
    if (t_max[1] < t_max[a]) a = 1;
    if (t_max[2] < t_max[a]) a = 2;
    if (!(t_max[a] < t_end)) return RayOutcome::Miss;
    cell[a] += step[a];
    if (cell[a] < 0 || cell[a] >= dims[a]) return RayOutcome::Miss;
    idx = step[a] > 0 ? idx + strides[a] : idx - strides[a];
    t_max[a] += t_delta[a];
  }
}

}  // namespace gplan
