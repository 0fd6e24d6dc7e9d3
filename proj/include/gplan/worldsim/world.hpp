#pragma once

#include "gplan/geometry.hpp"
#include "gplan/heightmap/heightfield.hpp"
#include "gplan/voxmap/voxel_map.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gplan {

class WorldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Labeled free-space volume (a room, a branch, a corridor) used for
/// region-coverage statistics.
struct Region {
  std::string label;
  Aabb box;

  bool operator==(const Region&) const = default;
};

/// Ground-truth geometry: axis-aligned solid boxes plus optional terrain.
/// Everything below the terrain surface is solid.
struct World {
  std::string name;
  Aabb bounds;
  std::vector<Aabb> solids;
  std::optional<Heightfield> heightfield;
  std::vector<Region> regions;
  std::optional<Vec3> start;
  std::optional<Vec3> target;

  /// Throws WorldError when a solid leaves the bounds or the terrain does not
  /// span the xy-bounds.
  void validate() const;

  /// True iff the box has positive-volume overlap with a solid or reaches below the terrain.
  bool intersects_solid(const Aabb& box) const;

  /// Index of the region whose box contains p, if any.
  std::optional<std::size_t> region_of(const Vec3& p) const;

  bool operator==(const World&) const = default;
};

/// Ground-truth occupancy on a voxel grid: a voxel is Occupied when it overlaps
/// a solid at all, Free otherwise. No voxel is Unknown.
VoxelMap rasterize(const World& world, double resolution);

/// Plain-text world description:
///   name <str>
///   bounds x0 y0 z0 x1 y1 z1
///   solid x0 y0 z0 x1 y1 z1            (repeated)
///   region <label> x0 y0 z0 x1 y1 z1   (optional, repeated)
///   start x y z / target x y z          (optional)
///   heightfield grid <nx> <ny> <r_H>    followed by nx*ny row-major elevations
/// Lines starting with '#' are comments.
World read_world(std::istream& is);
World read_world_file(const std::string& path);
void write_world(std::ostream& os, const World& world);

/// Builds the solid decomposition of bounds minus the union of `free_space`.
std::vector<Aabb> carve(const Aabb& bounds, const std::vector<Aabb>& free_space);

enum class WorldKind {
  TCorridor,
  SixRooms,
  MultiBranchMine,
  TankCompartments,
  RampTerrain,
  // Scripted target-reach scenarios.
  TrDirect,
  TrDetour,
  TrWalled,
  // Open box with nothing inside, for oracles and smoke tests.
  OpenBox,
};

WorldKind parse_world_kind(const std::string& s);
const char* to_string(WorldKind k);

using WorldParams = std::map<std::string, double>;

/// Deterministic generator. Recognized params per kind are documented in the
/// README; unknown keys or out-of-range values throw WorldError.
World generate_world(WorldKind kind, const WorldParams& params = {}, std::uint64_t seed = 0);

}  // namespace gplan
