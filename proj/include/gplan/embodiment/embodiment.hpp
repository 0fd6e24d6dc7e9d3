#pragma once

#include "gplan/heightmap/elevation_map.hpp"
#include "gplan/kernel/configuration.hpp"
#include "gplan/voxmap/voxel_map.hpp"

#include <optional>
#include <stdexcept>

namespace gplan {

class EmbodimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EmbodimentKind { Aerial, Ground, Underwater };

const char* to_string(EmbodimentKind k);
EmbodimentKind parse_embodiment_kind(const std::string& s);

struct EmbodimentSpec {
  EmbodimentKind kind = EmbodimentKind::Aerial;
  Vec3 box = Vec3::Constant(0.6);  // B_R, full box dimensions
  // Ground only.
  double max_slope = deg2rad(30.0);
  FootprintSpec footprint{0.2, 0.2, 0.75};
  // Underwater only; unset disables the proximity constraint.
  std::optional<double> max_proximity;

  Vec3 half_extents() const { return 0.5 * box; }
  void validate() const;

  static EmbodimentSpec aerial(const Vec3& box);
  /// Footprint half-sizes default to half the box's x/y dimensions.
  static EmbodimentSpec ground(const Vec3& box, double clearance, double max_slope);
  static EmbodimentSpec underwater(const Vec3& box, std::optional<double> max_proximity);
};

/// Read-only snapshot of the maps a predicate may consult.
struct MapView {
  const VoxelMap* voxels = nullptr;
  const ElevationMap* elevation = nullptr;

  MapView() = default;
  explicit MapView(const VoxelMap& m, const ElevationMap* h = nullptr) : voxels(&m), elevation(h) {}
};

enum class VertexRejection { None, Collision, NoElevation, SlopeExceeded, TooFarFromStructure };

const char* to_string(VertexRejection r);

struct VertexCheck {
  std::optional<Configuration> accepted;  // possibly with a projected z
  VertexRejection reason = VertexRejection::None;

  bool ok() const { return accepted.has_value(); }
};

VertexCheck validate_vertex(const EmbodimentSpec& spec, const MapView& maps, const Configuration& xi);

/// Edge admissibility between two accepted configurations. Symmetric.
bool validate_edge(const EmbodimentSpec& spec, const MapView& maps, const Configuration& a, const Configuration& b);

}  // namespace gplan
