#include "doctest.h"

#include "gplan/sensors/sensors.hpp"
#include "test_support.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <random>
#include <set>

using namespace gplan;
using gplan::testing::free_map_with_boxes;

namespace {

constexpr double kPi = std::numbers::pi;

struct SteppedRay {
  RayOutcome outcome = RayOutcome::Miss;
  std::size_t stop = 0;
  std::vector<std::size_t> free;
};

// Walks the ray in tiny increments and records each new voxel entered.
SteppedRay step_ray(const VoxelMap& map, const Vec3& o, const Vec3& d, double range, double step) {
  SteppedRay r;
  std::size_t last = static_cast<std::size_t>(-1);
  for (double t = 0.0; t < range; t += step) {
    const VoxelKey k = map.key_of(o + t * d);
    if (!map.in_bounds(k)) return r;
    const std::size_t idx = map.index_of(k);
    if (idx == last) continue;
    last = idx;
    const VoxelState s = map.state_unchecked(idx);
    if (s != VoxelState::Free) {
      r.outcome = s == VoxelState::Occupied ? RayOutcome::Hit : RayOutcome::UnknownBlocked;
      r.stop = idx;
      return r;
    }
    r.free.push_back(idx);
  }
  return r;
}

VoxelMap unknown_map(const Vec3i& dims, double res) { return VoxelMap(Vec3::Zero(), dims, res); }

// Ray directions built from the sensor definition without RayFan.
std::vector<Vec3> reference_directions(const DepthSensorModel& d, double yaw) {
  auto spread = [](double span, double step) {
    std::vector<double> a;
    const int n = static_cast<int>(std::floor(span / step + 1e-9)) + 1;
    if (n == 1) return std::vector<double>{0.0};
    for (int k = 0; k < n; ++k) a.push_back(-span / 2 + span * k / (n - 1));
    return a;
  };
  std::vector<double> az;
  if (d.fov_h >= 2 * kPi - 1e-9) {
    const int n = static_cast<int>(std::ceil(2 * kPi / d.ray_resolution - 1e-9));
    for (int k = 0; k < n; ++k) az.push_back(2 * kPi * k / n);
  } else {
    for (double a : spread(d.fov_h, d.ray_resolution)) az.push_back(a + yaw);
  }
  std::vector<Vec3> out;
  for (double el : spread(d.fov_v, d.ray_resolution))
    for (double a : az) out.emplace_back(std::cos(el) * std::cos(a), std::cos(el) * std::sin(a), std::sin(el));
  return out;
}

std::size_t stepped_gain(const VoxelMap& map, const Vec3& p, double yaw, const DepthSensorModel& d) {
  std::set<std::size_t> hit;
  for (const auto& dir : reference_directions(d, yaw)) {
    const auto r = step_ray(map, p, dir, d.max_range, map.resolution() / 200.0);
    if (r.outcome == RayOutcome::UnknownBlocked) hit.insert(r.stop);
  }
  return hit.size();
}

// Independent frustum test via explicit rotation into the camera frame.
bool frustum_oracle(const Vec3& v, double yaw, double pitch, const CameraSensorModel& c) {
  const Eigen::Matrix3d r = (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) * Eigen::AngleAxisd(-pitch, Vec3::UnitY())).toRotationMatrix();
  const Vec3 local = r.transpose() * v;
  if (local.x() <= 0) return false;
  return std::abs(std::atan(local.y() / local.x())) <= c.fov_h / 2 + 1e-9 &&
         std::abs(std::atan(local.z() / local.x())) <= c.fov_v / 2 + 1e-9;
}

std::vector<VoxelKey> vis_oracle(const VoxelMap& map, const Vec3& p, double yaw, double pitch,
                                 const CameraSensorModel& c, const std::vector<VoxelKey>& targets) {
  std::vector<VoxelKey> out;
  for (const auto& t : targets) {
    const Vec3 v = map.center_of(t) - p;
    const double dist = v.norm();
    if (dist < c.min_range || dist > c.max_range || !frustum_oracle(v, yaw, pitch, c)) continue;
    const auto r = step_ray(map, p, v / dist, dist + map.resolution(), map.resolution() / 500.0);
    if (r.outcome != RayOutcome::Miss && r.stop == map.index_of(t)) out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_CASE("ray starting inside an occupied voxel hits immediately") {
  auto map = free_map_with_boxes({10, 10, 10}, 0.2, {{Vec3(0.8, 0.8, 0.8), Vec3(1.2, 1.2, 1.2)}});
  const auto r = ray_cast(map, Vec3(0.9, 0.9, 0.9), Vec3::UnitX(), 5.0);
  CHECK(r.outcome == RayOutcome::Hit);
  CHECK(r.stop == map.key_of(Vec3(0.9, 0.9, 0.9)));
  CHECK(r.traversed.empty());
}

TEST_CASE("ray from outside the grid misses") {
  auto map = free_map_with_boxes({5, 5, 5}, 0.2);
  const auto r = ray_cast(map, Vec3(-1, 0.5, 0.5), Vec3::UnitX(), 5.0);
  CHECK(r.outcome == RayOutcome::Miss);
  CHECK(r.traversed.empty());
}

TEST_CASE("ray traversal matches fine stepping in a free corridor") {
  auto map = free_map_with_boxes({60, 20, 20}, 0.2);
  const Vec3 o(0.5, 2.0, 2.0);
  const auto r = ray_cast(map, o, Vec3::UnitX(), 3.0);
  CHECK(r.outcome == RayOutcome::Miss);
  const auto ref = step_ray(map, o, Vec3::UnitX(), 3.0, 0.02);
  CHECK(r.traversed.size() == ref.free.size());
  CHECK(std::abs(static_cast<double>(r.traversed.size()) - 3.0 / 0.2) <= 1.0);

  std::mt19937 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(1.0, 3.0);
  int agree = 0, total = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 d = Vec3(n(rng), n(rng), n(rng)).normalized();
    const Vec3 p(u(rng) + 4.0, u(rng), u(rng));
    const auto a = ray_cast(map, p, d, 2.5);
    const auto b = step_ray(map, p, d, 2.5, 0.2 / 2000.0);
    std::vector<std::size_t> ai;
    for (const auto& k : a.traversed) ai.push_back(map.index_of(k));
    ++total;
    // Fine stepping can only skip voxels that the ray clips at a corner.
    const bool subset = std::all_of(b.free.begin(), b.free.end(), [&](std::size_t i) {
                          return std::find(ai.begin(), ai.end(), i) != ai.end();
                        });
    CHECK(subset);
    if (ai == b.free) ++agree;
  }
  CHECK(agree >= total * 9 / 10);
}

TEST_CASE("ray hits a wall one meter away") {
  auto map = free_map_with_boxes({30, 10, 10}, 0.2, {{Vec3(2.0, 0, 0), Vec3(2.2, 2, 2)}});
  const Vec3 o(1.0, 1.0, 1.0);
  const auto r = ray_cast(map, o, Vec3::UnitX(), 5.0);
  REQUIRE(r.outcome == RayOutcome::Hit);
  CHECK(r.stop == VoxelKey{10, 5, 5});
  const auto ref = step_ray(map, o, Vec3::UnitX(), 5.0, 0.02);
  CHECK(ref.outcome == RayOutcome::Hit);
  CHECK(map.index_of(r.stop) == ref.stop);
  // Range cut short of the wall.
  CHECK(ray_cast(map, o, Vec3::UnitX(), 0.85).outcome == RayOutcome::Miss);
}

TEST_CASE("unknown voxels terminate rays") {
  auto map = free_map_with_boxes({20, 10, 10}, 0.2);
  map.set({6, 5, 5}, VoxelState::Unknown);
  const auto r = ray_cast(map, Vec3(0.5, 1.1, 1.1), Vec3::UnitX(), 5.0);
  CHECK(r.outcome == RayOutcome::UnknownBlocked);
  CHECK(r.stop == VoxelKey{6, 5, 5});
}

TEST_CASE("gain is zero on a fully free map") {
  auto map = free_map_with_boxes({20, 20, 10}, 0.2);
  DepthSensorModel d;
  CHECK(gamma_ve(map, Configuration(Vec3(2, 2, 1)), d) == 0);
}

TEST_CASE("gain on an all-unknown 5^3 map equals the exhaustive first-hit count") {
  const auto map = unknown_map({5, 5, 5}, 0.2);
  DepthSensorModel d;
  d.fov_h = 2 * kPi;
  d.fov_v = kPi;
  d.max_range = 1e6;
  const Vec3 p(0.5, 0.5, 0.5);
  std::set<std::size_t> first;
  for (const auto& dir : reference_directions(d, 0.0)) {
    const auto r = step_ray(map, p, dir, 2.0, 0.001);
    if (r.outcome == RayOutcome::UnknownBlocked) first.insert(r.stop);
  }
  CHECK(gamma_ve(map, Configuration(p), d) == first.size());
  CHECK(first.size() == 1);
}

TEST_CASE("gain matches a reference ray enumeration around a free pocket") {
  // Unknown map with a free pocket and an occupied pillar.
  VoxelMap map(Vec3::Zero(), {30, 30, 15}, 0.2);
  for (std::size_t idx = 0; idx < map.voxel_count(); ++idx) {
    const Vec3 c = map.center_of(map.key_at(idx));
    if ((c - Vec3(3, 3, 1.5)).norm() < 1.3) map.set_unchecked(idx, VoxelState::Free);
    if (std::abs(c.x() - 3.7) < 0.2 && std::abs(c.y() - 3.0) < 0.2) map.set_unchecked(idx, VoxelState::Occupied);
  }
  map.recompute_sdf();
  for (double fov_h : {2 * kPi, deg2rad(100)}) {
    DepthSensorModel d;
    d.fov_h = fov_h;
    d.fov_v = kPi / 2;
    d.max_range = 3.0;
    d.ray_resolution = deg2rad(3);
    for (double yaw : {0.0, 1.2, -2.5}) {
      const Configuration xi(Vec3(2.9, 2.95, 1.45), yaw);
      const double ours = static_cast<double>(gamma_ve(map, xi, d));
      const double ref = static_cast<double>(stepped_gain(map, xi.p, xi.yaw, d));
      CHECK(ours > 0);
      CHECK(std::abs(ours - ref) <= 0.02 * ref);
    }
  }
}

TEST_CASE("limited field of view facing away from the unknown sees nothing") {
  auto map = free_map_with_boxes({40, 20, 10}, 0.2);
  for (int k = 0; k < 10; ++k)
    for (int j = 0; j < 20; ++j)
      for (int i = 30; i < 40; ++i) map.set({i, j, k}, VoxelState::Unknown);
  DepthSensorModel d;
  d.fov_h = deg2rad(90);
  d.fov_v = deg2rad(60);
  d.max_range = 8.0;
  const Vec3 p(3.0, 2.0, 1.0);
  CHECK(gamma_ve(map, Configuration(p, kPi), d) == 0);
  CHECK(gamma_ve(map, Configuration(p, 0.0), d) > 0);
  // Yaw has no effect for an omnidirectional sensor.
  DepthSensorModel omni;
  omni.max_range = 8.0;
  CHECK(gamma_ve(map, Configuration(p, kPi), omni) == gamma_ve(map, Configuration(p, 0.3), omni));
}

TEST_CASE("gain never increases when unknown voxels turn out occupied") {
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> coin(0, 3);
  DepthSensorModel d;
  d.max_range = 2.0;
  d.ray_resolution = deg2rad(4);
  for (int trial = 0; trial < 10; ++trial) {
    VoxelMap map(Vec3::Zero(), {15, 15, 10}, 0.2);
    for (std::size_t idx = 0; idx < map.voxel_count(); ++idx) {
      const int c = coin(rng);
      map.set_unchecked(idx, c < 2 ? VoxelState::Free : (c == 2 ? VoxelState::Unknown : VoxelState::Occupied));
    }
    const Configuration xi(Vec3(1.5, 1.5, 1.0));
    map.set(map.key_of(xi.p), VoxelState::Free);
    const RayFan fan(d);
    std::size_t prev = gamma_ve(map, xi, fan);
    const auto unknown = gamma_ve_voxels(map, xi, fan);
    for (std::size_t n = 0; n < unknown.size(); n += 3) {
      map.set_unchecked(unknown[n], VoxelState::Occupied);
      const std::size_t now = gamma_ve(map, xi, fan);
      CHECK(now <= prev);
      prev = now;
    }
  }
}

TEST_CASE("sensor model validation") {
  DepthSensorModel d;
  d.fov_v = 4.0;
  CHECK_THROWS_AS(d.validate(), SensorError);
  CameraSensorModel c;
  c.min_range = 3.0;
  CHECK_THROWS_AS(c.validate(), SensorError);
  CHECK_NOTHROW(CameraSensorModel{}.validate());
  CHECK(RayFan(DepthSensorModel{}).size() == 180 * 46);
}

TEST_CASE("surface visibility matches a per-target oracle on a flat wall") {
  auto map = free_map_with_boxes({40, 30, 15}, 0.2, {{Vec3(5.0, 0, 0), Vec3(5.4, 6, 3)}});
  const auto targets = map.occupied_in_shell(Vec3(3.5, 3.0, 1.5), 0.0, 10.0);
  CameraSensorModel c;
  c.fov_h = deg2rad(90);
  c.fov_v = deg2rad(60);
  c.min_range = 0.5;
  c.max_range = 3.0;
  for (double yaw : {0.0, 0.4, -0.7, kPi}) {
    const Configuration xi(Vec3(3.5, 3.0, 1.5), yaw);
    auto ours = vis_surface(map, xi, c, targets);
    auto ref = vis_oracle(map, xi.p, yaw, c.mount_pitch, c, targets);
    std::sort(ours.begin(), ours.end());
    std::sort(ref.begin(), ref.end());
    CHECK(ours == ref);
    if (yaw == 0.0) CHECK(ours.size() > 50);
    if (yaw == kPi) CHECK(ours.empty());
  }
}

TEST_CASE("occluded and too-close targets are excluded") {
  auto map = free_map_with_boxes({40, 20, 10}, 0.2,
                                 {{Vec3(2.0, 1.6, 0.8), Vec3(2.2, 2.4, 1.6)}, {Vec3(4.0, 0, 0), Vec3(4.2, 4, 2)}});
  CameraSensorModel c;
  c.max_range = 4.0;
  const Vec3 p(1.0, 2.0, 1.2);
  const VoxelKey behind = map.key_of(Vec3(4.1, 2.0, 1.2));
  const VoxelKey blocker = map.key_of(Vec3(2.1, 2.0, 1.2));
  CHECK(vis_surface(map, Configuration(p), c, {behind}).empty());
  CHECK(vis_surface(map, Configuration(p), c, {blocker}).size() == 1);
  c.min_range = 1.5;
  CHECK(vis_surface(map, Configuration(p), c, {blocker}).empty());
}

TEST_CASE("wider field of view sees a superset") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.5, 5.5);
  auto map = free_map_with_boxes({30, 30, 15}, 0.2,
                                 {{Vec3(1, 1, 0), Vec3(1.6, 1.4, 2)}, {Vec3(4, 3, 0.4), Vec3(4.4, 5, 2.6)},
                                  {Vec3(0, 0, 0), Vec3(6, 6, 0.2)}});
  const auto targets = map.occupied_in_shell(Vec3(3, 3, 1.5), 0.0, 20.0);
  for (int trial = 0; trial < 40; ++trial) {
    const Vec3 p(u(rng), u(rng), std::clamp(u(rng) * 0.4, 0.5, 2.5));
    if (map.state_at(p) != VoxelState::Free) continue;
    CameraSensorModel narrow;
    narrow.fov_h = deg2rad(60);
    narrow.fov_v = deg2rad(40);
    narrow.max_range = 4.0;
    CameraSensorModel wide = narrow;
    wide.fov_h = deg2rad(100);
    wide.fov_v = deg2rad(80);
    const Configuration xi(p, u(rng));
    auto a = vis_surface(map, xi, narrow, targets);
    auto b = vis_surface(map, xi, wide, targets);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
}

TEST_CASE("orientation set keeps exactly the yaws that see the wall") {
  auto map = free_map_with_boxes({40, 30, 15}, 0.2, {{Vec3(5.0, 0, 0), Vec3(5.4, 6, 3)}});
  CameraSensorModel c;
  c.fov_h = deg2rad(60);
  c.fov_v = deg2rad(50);
  c.min_range = 0.5;
  c.max_range = 2.5;
  const Vec3 p(3.5, 3.0, 1.5);
  const auto shell = map.occupied_in_shell(p, c.min_range, c.max_range);
  REQUIRE_FALSE(shell.empty());
  const auto views = orientation_set(map, p, c, shell, 8, 5);
  std::set<double> kept;
  for (const auto& v : views) {
    CHECK(v.pitch == c.mount_pitch);
    kept.insert(v.yaw);
  }
  for (int k = 0; k < 8; ++k) {
    const double yaw = wrap_angle(2 * kPi * k / 8);
    const bool sees = !vis_surface(map, Configuration(p, yaw), c, shell).empty();
    CHECK(kept.count(yaw) == static_cast<std::size_t>(sees));
  }
  CHECK(kept.count(0.0) == 1);
  CHECK(kept.count(wrap_angle(kPi)) == 0);
  CHECK(orientation_set(map, Vec3(1.0, 3.0, 1.5), c, {}, 8, 5).empty());
}

TEST_CASE("active camera sees at least what the passive camera sees") {
  auto map = free_map_with_boxes({30, 30, 15}, 0.2,
                                 {{Vec3(0, 0, 0), Vec3(6, 6, 0.4)}, {Vec3(0, 0, 2.6), Vec3(6, 6, 3)},
                                  {Vec3(2.4, 2.4, 0.4), Vec3(2.8, 3.6, 1.2)}});
  CameraSensorModel passive;
  passive.fov_h = deg2rad(90);
  passive.fov_v = deg2rad(60);
  passive.min_range = 0.6;
  passive.max_range = 2.5;
  CameraSensorModel active = passive;
  active.pitch_actuated = true;
  active.pitch_min = -kPi / 2;
  active.pitch_max = kPi / 4;
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.6, 5.4), uz(0.9, 2.1);
  int strictly = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Vec3 p(u(rng), u(rng), uz(rng));
    if (map.state_at(p) != VoxelState::Free) continue;
    const auto shell = map.occupied_in_shell(p, passive.min_range, passive.max_range);
    std::set<VoxelKey> pas, act;
    for (const auto& v : orientation_set(map, p, passive, shell, 16, 5)) pas.insert(v.visible.begin(), v.visible.end());
    for (const auto& v : orientation_set(map, p, active, shell, 16, 5)) act.insert(v.visible.begin(), v.visible.end());
    CHECK(std::includes(act.begin(), act.end(), pas.begin(), pas.end()));
    if (act.size() > pas.size()) ++strictly;
  }
  CHECK(strictly > 0);
  const auto grid = pitch_grid(active, 5);
  CHECK(std::find(grid.begin(), grid.end(), 0.0) != grid.end());
  CHECK(pitch_grid(passive, 5) == std::vector<double>{0.0});
}
