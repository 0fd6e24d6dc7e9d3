#include "gplan/voxmap/voxel_map.hpp"

#include <limits>
#include <ostream>

namespace gplan {

namespace {

constexpr double kInf = 1.0e20;

// 1D squared distance transform of sampled function f (Felzenszwalb and
// Huttenlocher). Values stay integral when f is integral or kInf.
void distance_transform_1d(const double* f, int n, double* d, int* v, double* z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    if (f[q] >= kInf) continue;
    if (f[v[0]] >= kInf) {
      v[0] = q;
      continue;
    }
    double s = 0.0;
    while (true) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
          (2.0 * q - 2.0 * p);
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    if (s <= z[k]) {
      // k == 0 and the new parabola dominates everywhere.
      v[0] = q;
      z[1] = kInf;
      continue;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (f[v[0]] >= kInf) {
    for (int q = 0; q < n; ++q) d[q] = kInf;
    return;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

const char* to_string(VoxelState s) {
  switch (s) {
    case VoxelState::Unknown:
      return "unknown";
    case VoxelState::Free:
      return "free";
    case VoxelState::Occupied:
      return "occupied";
  }
  return "?";
}

VoxelMap::VoxelMap(const Vec3& origin, const Vec3i& dims, double resolution)
    : origin_(origin), dims_(dims), resolution_(resolution) {
  if (!(resolution > 0.0)) throw VoxelMapError("resolution must be positive");
  if ((dims.array() < 1).any()) throw VoxelMapError("dims must be >= 1 per axis");
  const std::size_t n = static_cast<std::size_t>(dims.x()) * dims.y() * dims.z();
  states_.assign(n, static_cast<std::uint8_t>(VoxelState::Unknown));
  sdf_.assign(n, kNoSurface);
}

VoxelMap VoxelMap::covering(const Aabb& bounds, double resolution) {
  Vec3i dims;
  for (int a = 0; a < 3; ++a) {
    const double cells = (bounds.max[a] - bounds.min[a]) / resolution;
    dims[a] = std::max(1, static_cast<int>(std::ceil(cells - 1e-9)));
  }
  return VoxelMap(bounds.min, dims, resolution);
}

Aabb VoxelMap::bounds() const {
  return {origin_, origin_ + dims_.cast<double>() * resolution_};
}

VoxelKey VoxelMap::key_of(const Vec3& p) const {
  const Vec3 rel = (p - origin_) / resolution_;
  return {static_cast<int>(std::floor(rel.x())), static_cast<int>(std::floor(rel.y())),
          static_cast<int>(std::floor(rel.z()))};
}

Vec3 VoxelMap::center_of(const VoxelKey& key) const {
  return origin_ + (Vec3(key.i, key.j, key.k) + Vec3::Constant(0.5)) * resolution_;
}

VoxelKey VoxelMap::key_at(std::size_t index) const {
  const std::size_t nx = dims_.x();
  const std::size_t ny = dims_.y();
  return {static_cast<int>(index % nx), static_cast<int>((index / nx) % ny),
          static_cast<int>(index / (nx * ny))};
}

VoxelState VoxelMap::state_at(const Vec3& p) const { return state(key_of(p)); }

void VoxelMap::set(const VoxelKey& key, VoxelState s) {
  if (!in_bounds(key)) throw VoxelMapError("key outside grid");
  set_unchecked(index_of(key), s);
}

void VoxelMap::set_unchecked(std::size_t index, VoxelState s) {
  const auto raw = static_cast<std::uint8_t>(s);
  if (states_[index] == raw) return;
  states_[index] = raw;
  ++revision_;
  sdf_dirty_ = true;
}

void VoxelMap::recompute_sdf() {
  const int nx = dims_.x(), ny = dims_.y(), nz = dims_.z();
  const int n_max = std::max({nx, ny, nz});
  std::vector<double> grid(states_.size());
  for (std::size_t idx = 0; idx < states_.size(); ++idx)
    grid[idx] = states_[idx] == static_cast<std::uint8_t>(VoxelState::Occupied) ? 0.0 : kInf;

  std::vector<double> f(n_max), d(n_max), z(n_max + 1);
  std::vector<int> v(n_max);
  auto pass = [&](int len, auto&& index_of_line) {
    for (int q = 0; q < len; ++q) f[q] = grid[index_of_line(q)];
    distance_transform_1d(f.data(), len, d.data(), v.data(), z.data());
    for (int q = 0; q < len; ++q) grid[index_of_line(q)] = d[q];
  };
  const std::size_t sx = 1, sy = nx, sz = static_cast<std::size_t>(nx) * ny;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      pass(nx, [&](int q) { return q * sx + j * sy + k * sz; });
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i)
      pass(ny, [&](int q) { return i * sx + q * sy + k * sz; });
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      pass(nz, [&](int q) { return i * sx + j * sy + q * sz; });

  for (std::size_t idx = 0; idx < grid.size(); ++idx)
    sdf_[idx] = grid[idx] >= kInf ? kNoSurface : std::sqrt(grid[idx]) * resolution_;
  sdf_dirty_ = false;
}

double VoxelMap::sdf(const VoxelKey& key) const {
  if (sdf_dirty_) throw VoxelMapError("sdf dirty");
  if (!in_bounds(key)) return kNoSurface;
  return sdf_[index_of(key)];
}

double VoxelMap::sdf_at(const Vec3& p) const { return sdf(key_of(p)); }

bool VoxelMap::is_box_free(const Vec3& center, const Vec3& half_extents) const {
  bool free = true;
  const bool inside = for_each_in_box(center - half_extents, center + half_extents, [&](std::size_t idx) {
    if (states_[idx] != static_cast<std::uint8_t>(VoxelState::Free)) {
      free = false;
      return false;
    }
    return true;
  });
  return inside && free;
}

bool VoxelMap::is_segment_free(const Vec3& a, const Vec3& b, const Vec3& half_extents) const {
  // Sample from the lexicographically smaller endpoint so the result is symmetric.
  const Vec3& from = lex_less(b, a) ? b : a;
  const Vec3& to = lex_less(b, a) ? a : b;
  const Vec3 delta = to - from;
  const double step = 0.5 * resolution_;
  const int n = std::max(1, static_cast<int>(std::ceil(delta.norm() / step)));
  for (int s = 0; s <= n; ++s) {
    const Vec3 p = from + delta * (static_cast<double>(s) / n);
    if (!is_box_free(p, half_extents)) return false;
  }
  return true;
}

std::vector<VoxelKey> VoxelMap::occupied_in_shell(const Vec3& center, double r_in, double r_out) const {
  std::vector<VoxelKey> out;
  const VoxelKey lo = key_of(center - Vec3::Constant(r_out));
  const VoxelKey hi = key_of(center + Vec3::Constant(r_out));
  const double in2 = r_in * r_in, out2 = r_out * r_out;
  for (int k = std::max(0, lo.k); k <= std::min(dims_.z() - 1, hi.k); ++k)
    for (int j = std::max(0, lo.j); j <= std::min(dims_.y() - 1, hi.j); ++j)
      for (int i = std::max(0, lo.i); i <= std::min(dims_.x() - 1, hi.i); ++i) {
        const VoxelKey key{i, j, k};
        if (states_[index_of(key)] != static_cast<std::uint8_t>(VoxelState::Occupied)) continue;
        const double d2 = (center_of(key) - center).squaredNorm();
        if (d2 >= in2 && d2 <= out2) out.push_back(key);
      }
  return out;
}

std::size_t VoxelMap::count(VoxelState s) const {
  const auto raw = static_cast<std::uint8_t>(s);
  return static_cast<std::size_t>(std::count(states_.begin(), states_.end(), raw));
}

std::size_t VoxelMap::known_count() const { return states_.size() - count(VoxelState::Unknown); }

void VoxelMap::write_debug_dump(std::ostream& os) const {
  for (std::size_t idx = 0; idx < states_.size(); ++idx) {
    const auto s = static_cast<VoxelState>(states_[idx]);
    if (s == VoxelState::Unknown) continue;
    const VoxelKey key = key_at(idx);
    os << key.i << ' ' << key.j << ' ' << key.k << ' ' << to_string(s) << ' ';
    if (sdf_dirty_)
      os << "dirty";
    else
      os << sdf_[idx];
    os << '\n';
  }
}

}  // namespace gplan
