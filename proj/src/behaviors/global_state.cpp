#include "gplan/behaviors/global_state.hpp"

namespace gplan {

void GlobalGraphState::integrate(const PlanGraph& sparse, double e_max, double fuse_tolerance, const MapView& maps,
                                 const EmbodimentSpec& spec, std::uint64_t revision) {
  if (sparse.empty()) return;
  const std::size_t old_count = graph.vertex_count();
  const auto remap = merge_into_global(graph, sparse, e_max, fuse_tolerance, maps, spec);
  current = remap[0];
  if (home == kNoVertex) home = current;
  for (VertexId v = 0; v < sparse.vertex_count(); ++v)
    if (remap[v] >= old_count) {
      const Vertex& sv = sparse.vertex(v);
      frontiers.consider(remap[v], {static_cast<std::size_t>(sv.gain), sv.xi.yaw}, revision);
    }
}

}  // namespace gplan
