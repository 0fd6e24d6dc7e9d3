#include "gplan/behaviors/frontiers.hpp"

namespace gplan {

void FrontierSet::consider(VertexId v, const ViewGain& g, std::uint64_t revision) {
  if (static_cast<double>(g.gain) > threshold_)
    records_[v] = {v, g.gain, revision, g.yaw};
  else
    records_.erase(v);
}

std::size_t FrontierSet::refresh(const PlanGraph& global, const VoxelMap& map, const RayFan& fan) {
  std::size_t recast = 0;
  for (auto it = records_.begin(); it != records_.end();) {
    FrontierRecord& r = it->second;
    if (r.revision == map.revision()) {
      ++it;
      continue;
    }
    ++recast;
    const ViewGain g = best_view_gain(map, global.vertex(r.vertex).xi, fan);
    if (static_cast<double>(g.gain) > threshold_) {
      r = {r.vertex, g.gain, map.revision(), g.yaw};
      ++it;
    } else {
      it = records_.erase(it);
    }
  }
  return recast;
}

std::vector<FrontierRecord> update_frontiers(FrontierSet& frontiers, const PlanGraph& global, const VoxelMap& map,
                                             const RayFan& fan) {
  frontiers.refresh(global, map, fan);
  std::vector<FrontierRecord> out;
  for (const auto& [v, r] : frontiers.records()) out.push_back(r);
  return out;
}

std::vector<VertexId> plan_return_home(const PlanGraph& global, VertexId from, VertexId home) {
  const PathSet sp = shortest_paths(global, from);
  if (home >= global.vertex_count() || !sp.reachable(home)) throw BehaviorError("home unreachable");
  return sp.path_to(home);
}

std::vector<Configuration> configurations_of(const PlanGraph& g, const std::vector<VertexId>& ids) {
  std::vector<Configuration> out;
  out.reserve(ids.size());
  for (VertexId id : ids) out.push_back(g.vertex(id).xi);
  return out;
}

}  // namespace gplan
