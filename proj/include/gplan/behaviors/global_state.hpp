#pragma once

#include "gplan/behaviors/frontiers.hpp"
#include "gplan/kernel/kernel.hpp"

namespace gplan {

/// Persistent global graph with its frontier set, home vertex and the vertex
/// the robot stood on at the last integration.
struct GlobalGraphState {
  PlanGraph graph;
  FrontierSet frontiers;
  VertexId home = kNoVertex;
  VertexId current = kNoVertex;

  explicit GlobalGraphState(double frontier_threshold) : frontiers(frontier_threshold) {}

  /// Merges a sparse local graph (vertex 0 = robot) whose vertices carry their
  /// Γ_VE in `gain`; new vertices are scored as frontiers at `revision`.
  void integrate(const PlanGraph& sparse, double e_max, double fuse_tolerance, const MapView& maps,
                 const EmbodimentSpec& spec, std::uint64_t revision);
};

}  // namespace gplan
