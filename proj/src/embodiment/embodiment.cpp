#include "gplan/embodiment/embodiment.hpp"

#include <cmath>

namespace gplan {

namespace {

const ElevationMap& require_elevation(const MapView& maps) {
  if (!maps.elevation) throw EmbodimentError("elevation map required");
  return *maps.elevation;
}

}  // namespace

const char* to_string(EmbodimentKind k) {
  switch (k) {
    case EmbodimentKind::Aerial:
      return "aerial";
    case EmbodimentKind::Ground:
      return "ground";
    case EmbodimentKind::Underwater:
      return "underwater";
  }
  return "?";
}

EmbodimentKind parse_embodiment_kind(const std::string& s) {
  if (s == "aerial") return EmbodimentKind::Aerial;
  if (s == "ground") return EmbodimentKind::Ground;
  if (s == "underwater") return EmbodimentKind::Underwater;
  throw EmbodimentError("unknown embodiment '" + s + "'");
}

const char* to_string(VertexRejection r) {
  switch (r) {
    case VertexRejection::None:
      return "none";
    case VertexRejection::Collision:
      return "collision";
    case VertexRejection::NoElevation:
      return "no-elevation";
    case VertexRejection::SlopeExceeded:
      return "slope-exceeded";
    case VertexRejection::TooFarFromStructure:
      return "too-far-from-structure";
  }
  return "?";
}

void EmbodimentSpec::validate() const {
  if ((box.array() <= 0.0).any()) throw EmbodimentError("robot box must be positive");
  if (kind == EmbodimentKind::Ground) {
    if (!(max_slope > 0.0 && max_slope < std::numbers::pi / 2)) throw EmbodimentError("max slope must lie in (0, π/2)");
    if (footprint.half_length < 0 || footprint.half_width < 0 || footprint.clearance < 0)
      throw EmbodimentError("footprint sizes must be non-negative");
  }
  if (kind == EmbodimentKind::Underwater && max_proximity && !(*max_proximity > 0.0))
    throw EmbodimentError("proximity threshold must be positive");
}

EmbodimentSpec EmbodimentSpec::aerial(const Vec3& box) {
  EmbodimentSpec s;
  s.kind = EmbodimentKind::Aerial;
  s.box = box;
  return s;
}

EmbodimentSpec EmbodimentSpec::ground(const Vec3& box, double clearance, double max_slope) {
  EmbodimentSpec s;
  s.kind = EmbodimentKind::Ground;
  s.box = box;
  s.max_slope = max_slope;
  s.footprint = {0.5 * box.x(), 0.5 * box.y(), clearance};
  return s;
}

EmbodimentSpec EmbodimentSpec::underwater(const Vec3& box, std::optional<double> max_proximity) {
  EmbodimentSpec s;
  s.kind = EmbodimentKind::Underwater;
  s.box = box;
  s.max_proximity = max_proximity;
  return s;
}

VertexCheck validate_vertex(const EmbodimentSpec& spec, const MapView& maps, const Configuration& xi) {
  const VoxelMap& m = *maps.voxels;
  Configuration out = xi;
  if (spec.kind == EmbodimentKind::Ground) {
    const auto g = project_to_ground(require_elevation(maps), xi.p.head<2>(), spec.footprint, spec.max_slope);
    if (!g.ok())
      return {std::nullopt, g.rejection == GroundRejection::NoElevation ? VertexRejection::NoElevation
                                                                        : VertexRejection::SlopeExceeded};
    out.p.z() = *g.z;
  }
  if (!m.is_box_free(out.p, spec.half_extents())) return {std::nullopt, VertexRejection::Collision};
  if (spec.kind == EmbodimentKind::Underwater && spec.max_proximity && m.sdf_at(out.p) > *spec.max_proximity)
    return {std::nullopt, VertexRejection::TooFarFromStructure};
  return {out, VertexRejection::None};
}

bool validate_edge(const EmbodimentSpec& spec, const MapView& maps, const Configuration& a, const Configuration& b) {
  const VoxelMap& m = *maps.voxels;
  const Vec3 half = spec.half_extents();
  if (spec.kind != EmbodimentKind::Ground) return m.is_segment_free(a.p, b.p, half);

  // Ground: walk the terrain between the endpoints and sweep the body along the
  // projected polyline. Canonical direction keeps the check symmetric.
  const ElevationMap& h = require_elevation(maps);
  const bool swap = lex_less(b.p, a.p);
  const Vec3& from = swap ? b.p : a.p;
  const Vec3& to = swap ? a.p : b.p;
  const double step = h.resolution();
  if (!slope_ok_between(h, from.head<2>(), to.head<2>(), spec.max_slope, step)) return false;
  const Vec2 delta = to.head<2>() - from.head<2>();
  const int n = std::max(1, static_cast<int>(std::ceil(delta.norm() / step)));
  Vec3 prev = from;
  for (int s = 1; s <= n; ++s) {
    const Vec2 xy = from.head<2>() + delta * (static_cast<double>(s) / n);
    const auto z = h.elevation_at(xy.x(), xy.y());
    if (!z) return false;
    const Vec3 cur(xy.x(), xy.y(), *z + spec.footprint.clearance);
    if (!m.is_segment_free(prev, cur, half)) return false;
    prev = cur;
  }
  return true;
}

}  // namespace gplan
