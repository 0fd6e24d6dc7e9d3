#pragma once

#include "gplan/geometry.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gplan {

enum class VoxelState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

const char* to_string(VoxelState s);

struct VoxelKey {
  int i = 0;
  int j = 0;
  int k = 0;

  auto operator<=>(const VoxelKey&) const = default;
};

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& key) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(key.i);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(key.j);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(key.k);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

class VoxelMapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense voxel grid holding the occupancy belief and an unsigned distance
/// field (distance from each voxel center to the nearest Occupied voxel
/// center). Reads are safe to share across threads; mutation is not.
class VoxelMap {
 public:
  /// Distance reported when the map holds no Occupied voxel.
  static constexpr double kNoSurface = 1.0e9;

  VoxelMap(const Vec3& origin, const Vec3i& dims, double resolution);

  /// Smallest grid of the given resolution covering `bounds`.
  static VoxelMap covering(const Aabb& bounds, double resolution);

  const Vec3& origin() const { return origin_; }
  const Vec3i& dims() const { return dims_; }
  double resolution() const { return resolution_; }
  Aabb bounds() const;
  std::size_t voxel_count() const { return states_.size(); }

  bool in_bounds(const VoxelKey& key) const {
    return key.i >= 0 && key.j >= 0 && key.k >= 0 && key.i < dims_.x() && key.j < dims_.y() &&
           key.k < dims_.z();
  }
  /// Key of the voxel containing `p`; may be out of bounds.
  VoxelKey key_of(const Vec3& p) const;
  Vec3 center_of(const VoxelKey& key) const;
  std::size_t index_of(const VoxelKey& key) const {
    return static_cast<std::size_t>(key.i) +
           static_cast<std::size_t>(dims_.x()) *
               (static_cast<std::size_t>(key.j) + static_cast<std::size_t>(dims_.y()) * key.k);
  }
  VoxelKey key_at(std::size_t index) const;

  /// State of the voxel containing `p`; Unknown outside the grid.
  VoxelState state_at(const Vec3& p) const;
  VoxelState state(const VoxelKey& key) const {
    return in_bounds(key) ? static_cast<VoxelState>(states_[index_of(key)]) : VoxelState::Unknown;
  }
  VoxelState state_unchecked(std::size_t index) const {
    return static_cast<VoxelState>(states_[index]);
  }

  /// Throws VoxelMapError("key outside grid") for out-of-bounds keys.
  void set(const VoxelKey& key, VoxelState s);
  void set_unchecked(std::size_t index, VoxelState s);

  /// Monotone counter bumped by every state change.
  std::uint64_t revision() const { return revision_; }
  bool sdf_dirty() const { return sdf_dirty_; }

  /// Exact Euclidean distance transform of the Occupied set over voxel centers.
  void recompute_sdf();
  /// Distance of the voxel containing `p`; kNoSurface outside the grid.
  /// Throws VoxelMapError("sdf dirty") if the map changed since the last recompute.
  double sdf_at(const Vec3& p) const;
  double sdf(const VoxelKey& key) const;

  /// True iff every voxel overlapping the box is Free.
  bool is_box_free(const Vec3& center, const Vec3& half_extents) const;
  /// Box sweep along a->b sampled with step <= resolution/2.
  bool is_segment_free(const Vec3& a, const Vec3& b, const Vec3& half_extents) const;

  /// Occupied voxels whose centers lie at distance in [r_in, r_out] from `center`.
  std::vector<VoxelKey> occupied_in_shell(const Vec3& center, double r_in, double r_out) const;

  std::size_t count(VoxelState s) const;
  /// Free + Occupied voxels.
  std::size_t known_count() const;

  /// `i j k state sdf` for every non-Unknown voxel.
  void write_debug_dump(std::ostream& os) const;

  /// Calls fn(index) for every voxel index overlapping the closed box; returns
  /// false if the box leaves the grid.
  template <typename Fn>
  bool for_each_in_box(const Vec3& lo, const Vec3& hi, Fn&& fn) const;

 private:
  Vec3 origin_;
  Vec3i dims_;
  double resolution_;
  std::vector<std::uint8_t> states_;
  std::vector<double> sdf_;
  std::uint64_t revision_ = 0;
  bool sdf_dirty_ = false;
};

template <typename Fn>
bool VoxelMap::for_each_in_box(const Vec3& lo, const Vec3& hi, Fn&& fn) const {
  // A voxel whose face only touches the box is excluded.
  constexpr double kTouch = 1e-9;
  Vec3i first, last;
  for (int a = 0; a < 3; ++a) {
    const double l = (lo[a] - origin_[a]) / resolution_;
    const double h = (hi[a] - origin_[a]) / resolution_;
    first[a] = static_cast<int>(std::floor(l));
    last[a] = std::max(first[a], static_cast<int>(std::floor(h - kTouch)));
    if (first[a] < 0 || last[a] >= dims_[a]) return false;
  }
  for (int k = first.z(); k <= last.z(); ++k)
    for (int j = first.y(); j <= last.y(); ++j)
      for (int i = first.x(); i <= last.x(); ++i)
        if (!fn(index_of({i, j, k}))) return true;
  return true;
}

}  // namespace gplan
