#include "gplan/behaviors/target_reach.hpp"

#include <cmath>

namespace gplan {

void TargetReachParams::validate() const {
  if (!(reach_radius > 0.0 && target_radius > 0.0 && lookahead > 0.0))
    throw BehaviorError("target-reach radii must be positive");
  if (stall_limit < 1) throw BehaviorError("stall limit must be at least 1");
}

const char* to_string(TrAction a) {
  switch (a) {
    case TrAction::LocalPath:
      return "local";
    case TrAction::Reached:
      return "reached";
    case TrAction::Unreachable:
      return "unreachable";
  }
  return "?";
}

TargetReachPlanner::TargetReachPlanner(const EmbodimentSpec& spec, const DepthSensorModel& depth,
                                       const TargetReachParams& target, const ExplorationParams& params)
    : spec_(spec), fan_(depth), target_(target), params_(params), global_(params.gains.frontier_threshold) {
  spec_.validate();
  target_.validate();
  params_.kernel.validate();
  params_.sampling.validate();
}

void TargetReachPlanner::integrate_scored(PlanGraph sparse, const MapView& maps) {
  for (VertexId v = 0; v < sparse.vertex_count(); ++v) {
    Vertex& vx = sparse.vertex(v);
    const ViewGain g = best_view_gain(*maps.voxels, vx.xi, fan_);
    vx.gain = static_cast<double>(g.gain);
    vx.xi.yaw = g.yaw;
  }
  global_.integrate(sparse, params_.kernel.e_max, params_.fuse_tolerance, maps, spec_, maps.voxels->revision());
}

TrDecision TargetReachPlanner::plan(const Configuration& xi0, const MapView& maps, std::uint64_t seed) {
  const Vec3& pt = target_.target;
  TrDecision d;
  d.path = {xi0};
  const double here = (xi0.p - pt).norm();
  if (here <= target_.reach_radius) {
    d.action = TrAction::Reached;
    return d;
  }
  const VoxelMap& map = *maps.voxels;

  const PlanGraph local = build_local_graph(xi0, maps, spec_, params_.kernel, params_.sampling, seed);
  const PathSet sp = shortest_paths(local, 0);
  integrate_scored(extract_sparse_subgraph(local, sp, params_.kernel.effective_cluster_radius()), maps);

  // Stalled: no local vertex gets meaningfully closer to the target than the robot.
  d.stalled = true;
  for (VertexId v = 1; v < local.vertex_count(); ++v)
    if ((local.position(v) - pt).norm() < here - params_.fuse_tolerance) d.stalled = false;
  stalls_ = d.stalled ? stalls_ + 1 : 0;
  if (stalls_ >= target_.stall_limit) {
    d.action = TrAction::Unreachable;
    return d;
  }

  const PathSet from_current = shortest_paths(global_.graph, global_.current);
  VertexId guide = kNoVertex;
  double nearest = target_.target_radius;
  for (VertexId v = 0; v < global_.graph.vertex_count(); ++v) {
    const double dv = (global_.graph.position(v) - pt).norm();
    if (from_current.reachable(v) && dv <= nearest) {
      nearest = dv;
      guide = v;
    }
  }
  if (guide == kNoVertex) {
    global_.frontiers.erase(global_.current);
    update_frontiers(global_.frontiers, global_.graph, map, fan_);
    double best_cost = std::numeric_limits<double>::infinity();
    for (const auto& [v, rec] : global_.frontiers.records()) {
      if (!from_current.reachable(v)) continue;
      const double cost = frontier_cost(from_current.dist[v], (global_.graph.position(v) - pt).norm());
      if (cost < best_cost) {
        best_cost = cost;
        guide = v;
      }
    }
    if (guide != kNoVertex) {
      d.guide_is_frontier = true;
      if (last_frontier_ != kNoVertex && last_frontier_ != guide) {
        const Vec3 before = global_.graph.position(last_frontier_) - xi0.p;
        const Vec3 after = global_.graph.position(guide) - xi0.p;
        d.frontier_switch = before.dot(after) < 0.0;
      }
      last_frontier_ = guide;
    }
  }
  d.guide = guide;

  const bool target_local = local_box(params_.kernel, map, xi0.p).contains(pt);
  if (target_local) {
    d.lookahead = pt;
  } else if (guide == kNoVertex) {
    d.action = TrAction::Unreachable;
    return d;
  } else {
    std::vector<Vec3> sigma_guide{xi0.p};
    for (VertexId v : from_current.path_to(guide)) sigma_guide.push_back(global_.graph.position(v));
    d.lookahead = point_along(sigma_guide, target_.lookahead);
  }

  VertexId best = 0;
  double best_dist = (local.position(0) - d.lookahead).norm();
  for (VertexId v = 1; v < local.vertex_count(); ++v) {
    const double dv = (local.position(v) - d.lookahead).norm();
    if (sp.reachable(v) && dv < best_dist) {
      best_dist = dv;
      best = v;
    }
  }
  d.path = path_configurations(local, sp, best);
  for (std::size_t i = 1; i < d.path.size(); ++i) {
    const Vec3 step = d.path[i].p - d.path[i - 1].p;
    if (step.head<2>().norm() > 1e-6) d.path[i].yaw = std::atan2(step.y(), step.x());
  }

  // Arrived at the guiding frontier: look where its gain is and drop it.
  if (d.guide_is_frontier && !target_local &&
      (best == 0 || (global_.graph.position(guide) - xi0.p).norm() <= target_.reach_radius)) {
    const auto it = global_.frontiers.records().find(guide);
    Configuration turn = xi0;
    if (it != global_.frontiers.records().end()) turn.yaw = it->second.yaw;
    global_.frontiers.erase(guide);
    d.path = {xi0, turn};
    return d;
  }

  // Keep the executed path in the global graph so the next root stays connected.
  PlanGraph chain;
  for (const auto& xi : d.path) chain.add_vertex(xi);
  for (VertexId v = 1; v < chain.vertex_count(); ++v) chain.add_edge(v - 1, v);
  integrate_scored(std::move(chain), maps);
  return d;
}

}  // namespace gplan
