#include "gplan/worldsim/oracles.hpp"

#include "gplan/worldsim/mission.hpp"

#include <cmath>

namespace gplan {

namespace {

VoxelMap truth_within_limit(const World& world, const OracleOptions& options) {
  const Vec3 cells = (world.bounds.size() / options.resolution).array().ceil();
  if (cells.prod() > static_cast<double>(options.voxel_limit)) throw WorldError("oracle limit exceeded");
  return rasterize(world, options.resolution);
}

}  // namespace

std::vector<char> free_component(const VoxelMap& truth, const Vec3& p) {
  std::vector<char> seen(truth.voxel_count(), 0);
  const VoxelKey start = truth.key_of(p);
  if (truth.state(start) != VoxelState::Free) return seen;
  std::vector<VoxelKey> stack{start};
  seen[truth.index_of(start)] = 1;
  static constexpr int kSteps[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  while (!stack.empty()) {
    const VoxelKey k = stack.back();
    stack.pop_back();
    for (const auto& s : kSteps) {
      const VoxelKey n{k.i + s[0], k.j + s[1], k.k + s[2]};
      if (!truth.in_bounds(n) || truth.state(n) != VoxelState::Free) continue;
      const std::size_t idx = truth.index_of(n);
      if (seen[idx]) continue;
      seen[idx] = 1;
      stack.push_back(n);
    }
  }
  return seen;
}

std::vector<Vec3> oracle_positions(const World& world, const VoxelMap& truth, const EmbodimentSpec& spec,
                                   const OracleOptions& options) {
  const double step = options.grid_step > 0.0 ? options.grid_step : 2.0 * options.resolution;
  std::vector<char> component;
  if (options.reachable_from) component = free_component(truth, *options.reachable_from);
  std::vector<Vec3> out;
  const auto accept = [&](const MapView& maps, const Vec3& p) {
    const auto check = validate_vertex(spec, maps, Configuration(p, 0.0));
    if (!check.ok()) return;
    const Vec3 q = check.accepted->p;
    if (options.reachable_from) {
      const VoxelKey key = truth.key_of(q);
      if (!truth.in_bounds(key) || !component[truth.index_of(key)]) return;
    }
    out.push_back(q);
  };

  const Aabb& b = world.bounds;
  const auto count = [&](int a) { return std::max(1, static_cast<int>(std::floor(b.size()[a] / step))); };
  if (spec.kind != EmbodimentKind::Ground) {
    const MapView maps(truth);
    for (int k = 0; k < count(2); ++k)
      for (int j = 0; j < count(1); ++j)
        for (int i = 0; i < count(0); ++i) accept(maps, b.min + Vec3(i + 0.5, j + 0.5, k + 0.5) * step);
    return out;
  }

  // Ground: one candidate per floor surface in each column, judged on a local
  // elevation map sensed from just above that floor.
  const double r = options.resolution;
  const double reach = spec.footprint.half_length + spec.footprint.half_width + 4.0 * r;
  for (int j = 0; j < count(1); ++j)
    for (int i = 0; i < count(0); ++i) {
      const Vec2 xy = b.min.head<2>() + Vec2(i + 0.5, j + 0.5) * step;
      const VoxelKey col = truth.key_of(Vec3(xy.x(), xy.y(), b.min.z()));
      for (int k = 1; k < truth.dims().z(); ++k) {
        const VoxelKey here{col.i, col.j, k}, below{col.i, col.j, k - 1};
        if (!truth.in_bounds(here) || truth.state(here) != VoxelState::Free ||
            truth.state(below) != VoxelState::Occupied)
          continue;
        const double floor_z = truth.center_of(below).z() + 0.5 * r;
        ElevationMap h(Vec2::Constant(2.0 * reach + 2.0 * r), r, xy);
        update_elevation(h, world, truth, Vec3(xy.x(), xy.y(), floor_z + 0.5 * r), reach);
        accept(MapView(truth, &h), Vec3(xy.x(), xy.y(), floor_z + spec.footprint.clearance));
      }
    }
  return out;
}

std::vector<VoxelKey> residual_volume_oracle(const World& world, const EmbodimentSpec& spec,
                                             const DepthSensorModel& depth, const OracleOptions& options) {
  const VoxelMap truth = truth_within_limit(world, options);
  const RayFan fan(depth);
  std::vector<char> observed(truth.voxel_count(), 0);
  const int yaws = depth.omnidirectional() ? 1 : options.yaw_count;
  for (const Vec3& p : oracle_positions(world, truth, spec, options))
    for (int y = 0; y < yaws; ++y) {
      const double yaw = 2.0 * std::numbers::pi * y / yaws;
      fan.for_each_direction(yaw, [&](const Vec3& dir) {
        std::size_t stop = 0;
        const RayOutcome r =
            trace_ray(truth, p, dir, depth.max_range, [&](std::size_t idx) { observed[idx] = 1; }, &stop);
        if (r == RayOutcome::Hit) observed[stop] = 1;
      });
    }
  std::vector<VoxelKey> out;
  for (std::size_t idx = 0; idx < truth.voxel_count(); ++idx)
    if (!observed[idx]) out.push_back(truth.key_at(idx));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VoxelKey> residual_surface_oracle(const World& world, const EmbodimentSpec& spec,
                                              const CameraSensorModel& camera, const OracleOptions& options) {
  camera.validate();
  const VoxelMap truth = truth_within_limit(world, options);
  // 1 = target not yet seen, 2 = seen.
  std::vector<char> status(truth.voxel_count(), 0);
  for (std::size_t idx = 0; idx < truth.voxel_count(); ++idx) {
    if (truth.state_unchecked(idx) != VoxelState::Occupied) continue;
    if (options.surface_region && !options.surface_region->contains(truth.center_of(truth.key_at(idx)))) continue;
    status[idx] = 1;
  }
  for (const Vec3& p : oracle_positions(world, truth, spec, options)) {
    std::vector<VoxelKey> pending;
    for (const auto& key : truth.occupied_in_shell(p, camera.min_range, camera.max_range))
      if (status[truth.index_of(key)] == 1) pending.push_back(key);
    if (pending.empty()) continue;
    const auto shell = line_of_sight_targets(truth, p, camera, pending);
    for (const auto& view :
         orientation_set(truth, p, camera, shell, options.camera_yaw_count, options.camera_pitch_count))
      for (const auto& key : view.visible) status[truth.index_of(key)] = 2;
  }
  std::vector<VoxelKey> out;
  for (std::size_t idx = 0; idx < truth.voxel_count(); ++idx)
    if (status[idx] == 1) out.push_back(truth.key_at(idx));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gplan
