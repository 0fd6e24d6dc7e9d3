#include "gplan/sensors/sensors.hpp"

#include <algorithm>
#include <cmath>

namespace gplan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Evenly spaced angles over [-span/2, span/2] no farther apart than `step`.
std::vector<double> centered_angles(double span, double step) {
  const int n = static_cast<int>(std::floor(span / step + 1e-9)) + 1;
  if (n <= 1) return {0.0};
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = -0.5 * span + span * k / (n - 1);
  return out;
}

}  // namespace

void DepthSensorModel::validate() const {
  if (!(fov_h > 0.0 && fov_h <= kTwoPi + 1e-9)) throw SensorError("depth horizontal FoV must lie in (0, 2π]");
  if (!(fov_v > 0.0 && fov_v <= std::numbers::pi + 1e-9)) throw SensorError("depth vertical FoV must lie in (0, π]");
  if (!(max_range > 0.0)) throw SensorError("depth max range must be positive");
  if (!(ray_resolution > 0.0)) throw SensorError("ray resolution must be positive");
}

void CameraSensorModel::validate() const {
  if (!(fov_h > 0.0 && fov_h < std::numbers::pi)) throw SensorError("camera horizontal FoV must lie in (0, π)");
  if (!(fov_v > 0.0 && fov_v < std::numbers::pi)) throw SensorError("camera vertical FoV must lie in (0, π)");
  if (!(min_range > 0.0 && min_range < max_range)) throw SensorError("camera range needs 0 < d_min < d_max");
  if (!(pitch_min <= pitch_max)) throw SensorError("camera pitch range is empty");
}

RayFan::RayFan(const DepthSensorModel& model) : model_(model) {
  model_.validate();
  std::vector<double> yaws;
  if (model_.omnidirectional()) {
    const int n = std::max(1, static_cast<int>(std::ceil(kTwoPi / model_.ray_resolution - 1e-9)));
    for (int k = 0; k < n; ++k) yaws.push_back(kTwoPi * k / n);
  } else {
    yaws = centered_angles(model_.fov_h, model_.ray_resolution);
  }
  const auto pitches = centered_angles(model_.fov_v, model_.ray_resolution);
  dirs_.reserve(yaws.size() * pitches.size());
  for (double el : pitches)
    for (double az : yaws) dirs_.push_back(view_direction(az, el));
}

std::vector<Vec3> RayFan::directions(double yaw) const {
  std::vector<Vec3> out;
  out.reserve(dirs_.size());
  for_each_direction(yaw, [&](const Vec3& d) { out.push_back(d); });
  return out;
}

RayResult ray_cast(const VoxelMap& map, const Vec3& origin, const Vec3& dir, double max_range) {
  RayResult r;
  std::size_t stop = 0;
  r.outcome = trace_ray(
      map, origin, dir, max_range, [&](std::size_t idx) { r.traversed.push_back(map.key_at(idx)); }, &stop);
  if (r.outcome != RayOutcome::Miss) r.stop = map.key_at(stop);
  return r;
}

std::vector<std::size_t> gamma_ve_voxels(const VoxelMap& map, const Configuration& xi, const RayFan& fan) {
  std::vector<std::size_t> unknown;
  const double range = fan.model().max_range;
  fan.for_each_direction(xi.yaw, [&](const Vec3& d) {
    std::size_t stop = 0;
    if (trace_ray(map, xi.p, d, range, [](std::size_t) {}, &stop) == RayOutcome::UnknownBlocked)
      unknown.push_back(stop);
  });
  std::sort(unknown.begin(), unknown.end());
  unknown.erase(std::unique(unknown.begin(), unknown.end()), unknown.end());
  return unknown;
}

std::size_t gamma_ve(const VoxelMap& map, const Configuration& xi, const RayFan& fan) {
  return gamma_ve_voxels(map, xi, fan).size();
}

std::size_t gamma_ve(const VoxelMap& map, const Configuration& xi, const DepthSensorModel& d) {
  return gamma_ve(map, xi, RayFan(d));
}

Vec3 view_direction(double yaw, double pitch) {
  const double cp = std::cos(pitch);
  return {cp * std::cos(yaw), cp * std::sin(yaw), std::sin(pitch)};
}

bool in_frustum(const Vec3& offset, double yaw, double pitch, const CameraSensorModel& c) {
  const Vec3 forward = view_direction(yaw, pitch);
  const Vec3 left(-std::sin(yaw), std::cos(yaw), 0.0);
  const Vec3 up = forward.cross(left);
  const double x = offset.dot(forward);
  if (x <= 0.0) return false;
  const double y = offset.dot(left);
  const double z = offset.dot(up);
  return std::abs(std::atan2(y, x)) <= 0.5 * c.fov_h + 1e-12 && std::abs(std::atan2(z, x)) <= 0.5 * c.fov_v + 1e-12;
}

std::vector<VoxelKey> line_of_sight_targets(const VoxelMap& map, const Vec3& p, const CameraSensorModel& c,
                                            const std::vector<VoxelKey>& targets) {
  std::vector<VoxelKey> out;
  for (const auto& t : targets) {
    if (!map.in_bounds(t)) continue;
    const Vec3 v = map.center_of(t) - p;
    const double dist = v.norm();
    if (dist < c.min_range || dist > c.max_range) continue;
    std::size_t stop = 0;
    const auto outcome = trace_ray(map, p, v / dist, dist + map.resolution(), [](std::size_t) {}, &stop);
    if (outcome != RayOutcome::Miss && stop == map.index_of(t)) out.push_back(t);
  }
  return out;
}

double camera_pitch(const Configuration& xi, const CameraSensorModel& c) {
  return c.pitch_actuated && xi.pitch ? *xi.pitch : c.mount_pitch;
}

std::vector<VoxelKey> vis_surface(const VoxelMap& map, const Configuration& xi, const CameraSensorModel& c,
                                  const std::vector<VoxelKey>& targets) {
  const double pitch = camera_pitch(xi, c);
  std::vector<VoxelKey> out;
  for (const auto& t : line_of_sight_targets(map, xi.p, c, targets))
    if (in_frustum(map.center_of(t) - xi.p, xi.yaw, pitch, c)) out.push_back(t);
  return out;
}

std::vector<double> pitch_grid(const CameraSensorModel& c, int pitch_count) {
  if (!c.pitch_actuated || pitch_count <= 1) return {c.mount_pitch};
  std::vector<double> out;
  for (int k = 0; k < pitch_count; ++k) out.push_back(c.pitch_min + (c.pitch_max - c.pitch_min) * k / (pitch_count - 1));
  if (std::none_of(out.begin(), out.end(), [&](double v) { return std::abs(v - c.mount_pitch) < 1e-12; }))
    out.push_back(c.mount_pitch);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<OrientedView> orientation_set(const VoxelMap& map, const Vec3& p_v, const CameraSensorModel& c,
                                          const std::vector<VoxelKey>& shell_targets, int yaw_count, int pitch_count) {
  std::vector<OrientedView> out;
  if (shell_targets.empty() || yaw_count < 1) return out;
  auto seen = line_of_sight_targets(map, p_v, c, shell_targets);
  if (seen.empty()) return out;
  std::sort(seen.begin(), seen.end());
  std::vector<Vec3> offsets;
  offsets.reserve(seen.size());
  for (const auto& t : seen) offsets.push_back(map.center_of(t) - p_v);
  const auto pitches = pitch_grid(c, pitch_count);
  for (int k = 0; k < yaw_count; ++k) {
    const double yaw = wrap_angle(kTwoPi * k / yaw_count);
    for (double pitch : pitches) {
      OrientedView view{yaw, pitch, {}};
      for (std::size_t n = 0; n < seen.size(); ++n)
        if (in_frustum(offsets[n], yaw, pitch, c)) view.visible.push_back(seen[n]);
      if (!view.visible.empty()) out.push_back(std::move(view));
    }
  }
  return out;
}

}  // namespace gplan
