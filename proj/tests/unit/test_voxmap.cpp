#include "doctest.h"

#include "gplan/voxmap/voxel_map.hpp"
#include "test_support.hpp"

#include <random>
#include <set>
#include <sstream>

using namespace gplan;

namespace {

// O(N^2) distance transform over voxel centers, independent of the separable pass.
std::vector<double> brute_force_sdf(const VoxelMap& map) {
  std::vector<VoxelKey> occupied;
  for (std::size_t idx = 0; idx < map.voxel_count(); ++idx)
    if (map.state_unchecked(idx) == VoxelState::Occupied) occupied.push_back(map.key_at(idx));
  std::vector<double> out(map.voxel_count(), VoxelMap::kNoSurface);
  for (std::size_t idx = 0; idx < map.voxel_count(); ++idx) {
    const VoxelKey a = map.key_at(idx);
    long best = -1;
    for (const auto& b : occupied) {
      const long di = a.i - b.i, dj = a.j - b.j, dk = a.k - b.k;
      const long d2 = di * di + dj * dj + dk * dk;
      if (best < 0 || d2 < best) best = d2;
    }
    if (best >= 0) out[idx] = std::sqrt(static_cast<double>(best)) * map.resolution();
  }
  return out;
}

VoxelMap all_free(const Vec3i& dims, double res) {
  VoxelMap map(Vec3::Zero(), dims, res);
  for (std::size_t idx = 0; idx < map.voxel_count(); ++idx) map.set_unchecked(idx, VoxelState::Free);
  return map;
}

}  // namespace

TEST_CASE("voxel_state on fresh map and outside bounds") {
  VoxelMap map(Vec3::Zero(), Vec3i(4, 4, 4), 0.5);
  CHECK(map.state_at(Vec3(1.0, 1.0, 1.0)) == VoxelState::Unknown);
  CHECK(map.state_at(Vec3(-0.1, 1.0, 1.0)) == VoxelState::Unknown);
  CHECK(map.state_at(Vec3(10.0, 1.0, 1.0)) == VoxelState::Unknown);
  const VoxelKey key{1, 2, 3};
  map.set(key, VoxelState::Occupied);
  CHECK(map.state_at(map.center_of(key)) == VoxelState::Occupied);
  map.set(key, VoxelState::Free);
  CHECK(map.state(key) == VoxelState::Free);
}

TEST_CASE("set_voxel rejects keys outside the grid") {
  VoxelMap map(Vec3::Zero(), Vec3i(2, 2, 2), 1.0);
  CHECK_THROWS_WITH_AS(map.set({2, 0, 0}, VoxelState::Free), "key outside grid", VoxelMapError);
  CHECK_THROWS_AS(map.set({0, -1, 0}, VoxelState::Free), VoxelMapError);
}

TEST_CASE("constructor validates resolution and dims") {
  CHECK_THROWS_AS(VoxelMap(Vec3::Zero(), Vec3i(2, 2, 2), 0.0), VoxelMapError);
  CHECK_THROWS_AS(VoxelMap(Vec3::Zero(), Vec3i(0, 2, 2), 0.1), VoxelMapError);
}

TEST_CASE("sdf basic values") {
  VoxelMap map(Vec3::Zero(), Vec3i(5, 5, 5), 0.2);
  map.recompute_sdf();
  CHECK(map.sdf_at(Vec3(0.5, 0.5, 0.5)) == VoxelMap::kNoSurface);

  const VoxelKey c{2, 2, 2};
  map.set(c, VoxelState::Occupied);
  CHECK_THROWS_WITH_AS(map.sdf_at(map.center_of(c)), "sdf dirty", VoxelMapError);
  map.recompute_sdf();
  CHECK(map.sdf_at(map.center_of(c)) == 0.0);
  CHECK(map.sdf({3, 2, 2}) == doctest::Approx(0.2).epsilon(1e-12));

  map.set({3, 2, 2}, VoxelState::Occupied);
  map.recompute_sdf();
  CHECK(map.sdf({2, 2, 2}) == 0.0);
  CHECK(map.sdf({3, 2, 2}) == 0.0);
}

TEST_CASE("recompute_sdf equals brute force on random grids") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> dim(1, 12);
    VoxelMap map(Vec3::Zero(), Vec3i(dim(rng), dim(rng), dim(rng)), 0.2);
    std::bernoulli_distribution occ(trial % 4 == 0 ? 0.0 : 0.05 * (trial % 5));
    for (std::size_t idx = 0; idx < map.voxel_count(); ++idx)
      if (occ(rng)) map.set_unchecked(idx, VoxelState::Occupied);
    map.recompute_sdf();
    const auto expected = brute_force_sdf(map);
    for (std::size_t idx = 0; idx < map.voxel_count(); ++idx) REQUIRE(map.sdf(map.key_at(idx)) == expected[idx]);
  }
}

TEST_CASE("sdf of two sources is the pointwise min of single sources") {
  VoxelMap one(Vec3::Zero(), Vec3i(8, 8, 8), 0.2), two = one, both = one;
  one.set({1, 1, 1}, VoxelState::Occupied);
  two.set({6, 5, 2}, VoxelState::Occupied);
  both.set({1, 1, 1}, VoxelState::Occupied);
  both.set({6, 5, 2}, VoxelState::Occupied);
  one.recompute_sdf();
  two.recompute_sdf();
  both.recompute_sdf();
  for (std::size_t idx = 0; idx < both.voxel_count(); ++idx) {
    const auto key = both.key_at(idx);
    CHECK(both.sdf(key) == std::min(one.sdf(key), two.sdf(key)));
  }
}

TEST_CASE("sdf properties: self bound, Lipschitz, monotone under additions") {
  std::mt19937_64 rng(11);
  VoxelMap map(Vec3::Zero(), Vec3i(10, 9, 7), 0.3);
  std::bernoulli_distribution occ(0.03);
  for (std::size_t idx = 0; idx < map.voxel_count(); ++idx)
    if (occ(rng)) map.set_unchecked(idx, VoxelState::Occupied);
  map.recompute_sdf();
  std::vector<double> before(map.voxel_count());
  for (std::size_t idx = 0; idx < map.voxel_count(); ++idx) {
    const auto key = map.key_at(idx);
    before[idx] = map.sdf(key);
    if (map.state(key) == VoxelState::Occupied) CHECK(map.sdf(key) <= 0.3 * std::sqrt(3.0) / 2.0);
    for (const VoxelKey nb : {VoxelKey{key.i + 1, key.j, key.k}, VoxelKey{key.i, key.j + 1, key.k},
                              VoxelKey{key.i + 1, key.j + 1, key.k + 1}}) {
      if (!map.in_bounds(nb)) continue;
      const double dist = (map.center_of(nb) - map.center_of(key)).norm();
      CHECK(std::abs(map.sdf(nb) - map.sdf(key)) <= dist + 1e-12);
    }
  }
  map.set({5, 5, 5}, VoxelState::Occupied);
  map.recompute_sdf();
  for (std::size_t idx = 0; idx < map.voxel_count(); ++idx) CHECK(map.sdf(map.key_at(idx)) <= before[idx]);
}

TEST_CASE("is_box_free") {
  VoxelMap map = all_free(Vec3i(10, 10, 10), 0.2);
  CHECK(map.is_box_free(Vec3(1.0, 1.0, 1.0), Vec3(0.3, 0.3, 0.3)));
  map.set({5, 5, 5}, VoxelState::Unknown);
  CHECK_FALSE(map.is_box_free(Vec3(1.0, 1.0, 1.0), Vec3(0.3, 0.3, 0.3)));
  CHECK(map.is_box_free(Vec3(0.5, 0.5, 0.5), Vec3(0.2, 0.2, 0.2)));
  // Straddling the map boundary.
  CHECK_FALSE(map.is_box_free(Vec3(0.1, 1.0, 1.0), Vec3(0.3, 0.3, 0.3)));
  CHECK_FALSE(map.is_box_free(Vec3(1.9, 1.0, 1.0), Vec3(0.3, 0.3, 0.3)));
}

TEST_CASE("is_box_free is monotone in half extents") {
  std::mt19937_64 rng(3);
  VoxelMap map = all_free(Vec3i(12, 12, 12), 0.2);
  std::bernoulli_distribution occ(0.02);
  for (std::size_t idx = 0; idx < map.voxel_count(); ++idx)
    if (occ(rng)) map.set_unchecked(idx, VoxelState::Occupied);
  std::uniform_real_distribution<double> pos(0.0, 2.4), ext(0.0, 0.6);
  for (int n = 0; n < 500; ++n) {
    const Vec3 c(pos(rng), pos(rng), pos(rng));
    const Vec3 big(ext(rng), ext(rng), ext(rng));
    const Vec3 small = big * 0.5;
    if (map.is_box_free(c, big)) CHECK(map.is_box_free(c, small));
  }
}

TEST_CASE("is_segment_free") {
  VoxelMap map = all_free(Vec3i(20, 10, 10), 0.2);
  const Vec3 half(0.1, 0.1, 0.1);
  const Vec3 a(0.5, 1.0, 1.0), b(3.5, 1.0, 1.0);
  CHECK(map.is_segment_free(a, a, half));
  CHECK(map.is_segment_free(a, b, half));
  // Wall at x in [2.0, 2.2).
  for (int j = 0; j < 10; ++j)
    for (int k = 0; k < 10; ++k) map.set({10, j, k}, VoxelState::Occupied);
  CHECK_FALSE(map.is_segment_free(a, b, half));
  CHECK_FALSE(map.is_segment_free(b, a, half));
  CHECK(map.is_segment_free(a, Vec3(1.7, 1.5, 1.0), half));

  // Exhaustive oracle: the swept box touches the wall iff x-range reaches [2.0, 2.2).
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0.2, 3.8), uy(0.2, 1.8);
  for (int n = 0; n < 200; ++n) {
    const Vec3 p(ux(rng), uy(rng), 1.0), q(ux(rng), uy(rng), 1.0);
    const bool crosses = std::max(p.x(), q.x()) + 0.1 > 2.0 && std::min(p.x(), q.x()) - 0.1 < 2.2;
    CHECK(map.is_segment_free(p, q, half) == !crosses);
    CHECK(map.is_segment_free(p, q, half) == map.is_segment_free(q, p, half));
  }
}

TEST_CASE("occupied_in_shell matches a full scan") {
  VoxelMap map(Vec3::Zero(), Vec3i(5, 5, 5), 0.2);
  CHECK(map.occupied_in_shell(Vec3(0.5, 0.5, 0.5), 0.0, 1.0).empty());
  for (int j = 0; j < 5; ++j)
    for (int k = 0; k < 5; ++k) map.set({4, j, k}, VoxelState::Occupied);
  const Vec3 c(0.3, 0.5, 0.5);
  const auto got = map.occupied_in_shell(c, 0.4, 0.75);
  std::set<VoxelKey> expected;
  for (std::size_t idx = 0; idx < map.voxel_count(); ++idx) {
    const auto key = map.key_at(idx);
    const double d = (map.center_of(key) - c).norm();
    if (map.state(key) == VoxelState::Occupied && d >= 0.4 && d <= 0.75) expected.insert(key);
  }
  CHECK(std::set<VoxelKey>(got.begin(), got.end()) == expected);
  CHECK_FALSE(expected.empty());

  CHECK(map.occupied_in_shell(map.center_of({0, 0, 0}), 0.0, 0.0).empty());
  CHECK(map.occupied_in_shell(map.center_of({4, 0, 0}), 0.0, 0.0).size() == 1);
}

TEST_CASE("debug dump lists non-unknown voxels") {
  VoxelMap map(Vec3::Zero(), Vec3i(3, 3, 3), 0.5);
  map.set({0, 0, 0}, VoxelState::Occupied);
  map.set({1, 0, 0}, VoxelState::Free);
  map.recompute_sdf();
  std::ostringstream os;
  map.write_debug_dump(os);
  CHECK(os.str() == "0 0 0 occupied 0\n1 0 0 free 0.5\n");
}
