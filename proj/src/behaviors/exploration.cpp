#include "gplan/behaviors/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gplan {

const char* to_string(VeAction a) {
  switch (a) {
    case VeAction::LocalPath:
      return "local";
    case VeAction::GlobalReposition:
      return "reposition";
    case VeAction::Home:
      return "home";
    case VeAction::Done:
      return "done";
  }
  return "?";
}

ExplorationPlanner::ExplorationPlanner(const EmbodimentSpec& spec, const DepthSensorModel& depth,
                                       const ExplorationParams& params)
    : spec_(spec), fan_(depth), params_(params), global_(params.gains.frontier_threshold),
      direction_(params.gains.direction_window) {
  spec_.validate();
  params_.kernel.validate();
  params_.sampling.validate();
  params_.gains.validate();
}

VeDecision ExplorationPlanner::home_decision(const PathSet& from_current) {
  homing_ = true;
  if (!from_current.reachable(global_.home)) throw BehaviorError("home unreachable");
  VeDecision d;
  d.action = VeAction::Home;
  d.target = global_.home;
  d.path = configurations_of(global_.graph, from_current.path_to(global_.home));
  return d;
}

VeDecision ExplorationPlanner::plan(const Configuration& xi0, const MapView& maps, const MissionBudget& budget,
                                    std::uint64_t seed) {
  if (done_) return {};
  if (homing_ && (xi0.p - global_.graph.position(global_.home)).norm() <= params_.fuse_tolerance + 1e-9) {
    done_ = true;
    return {};
  }
  const VoxelMap& map = *maps.voxels;
  const GainParams& gp = params_.gains;

  local_ = build_local_graph(xi0, maps, spec_, params_.kernel, params_.sampling, seed);
  const PathSet sp = shortest_paths(local_, 0);
  for (VertexId v = 0; v < local_.vertex_count(); ++v) {
    Vertex& vx = local_.vertex(v);
    const ViewGain g = best_view_gain(map, vx.xi, fan_);
    vx.gain = static_cast<double>(g.gain);
    vx.xi.yaw = g.yaw;
  }

  // Cumulative discounted and raw gains, accumulated along the shortest-path tree.
  std::vector<VertexId> order(local_.vertex_count());
  std::iota(order.begin(), order.end(), VertexId{0});
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return sp.dist[a] < sp.dist[b]; });
  std::vector<double> discounted(local_.vertex_count(), 0.0), raw(local_.vertex_count(), 0.0);
  const auto dir = direction_.direction();
  VertexId best = kNoVertex;
  double best_score = -1.0;
  for (VertexId v : order) {
    if (!sp.reachable(v)) continue;
    const VertexId parent = sp.parent[v];
    const double g = local_.vertex(v).gain;
    discounted[v] = (parent == kNoVertex ? 0.0 : discounted[parent]) + g * std::exp(-gp.mu_l * sp.dist[v]);
    raw[v] = (parent == kNoVertex ? 0.0 : raw[parent]) + g;
  }
  for (VertexId v = 1; v < local_.vertex_count(); ++v) {
    if (!sp.reachable(v)) continue;
    const double lambda_d = direction_penalty_angle(local_.position(0), local_.position(v), dir);
    const double score = std::exp(-gp.mu_d * lambda_d) * discounted[v];
    if (score > best_score) {
      best_score = score;
      best = v;
    }
  }

  std::vector<VertexId> must_keep;
  if (best != kNoVertex) must_keep.push_back(best);
  const PlanGraph sparse =
      extract_sparse_subgraph(local_, sp, params_.kernel.effective_cluster_radius(), must_keep);
  global_.integrate(sparse, params_.kernel.e_max, params_.fuse_tolerance, maps, spec_, map.revision());
  if (local_.vertex_count() <= 1 && global_.graph.vertex_count() <= 1) throw BehaviorError("planner trapped");

  const PathSet from_current = shortest_paths(global_.graph, global_.current);
  if (homing_) return home_decision(from_current);
  if (!from_current.reachable(global_.home)) throw BehaviorError("home unreachable");
  if (check_homing(budget, from_current.dist[global_.home])) return home_decision(from_current);

  if (best != kNoVertex && raw[best] >= gp.frontier_threshold) {
    VeDecision d;
    d.action = VeAction::LocalPath;
    d.path = path_configurations(local_, sp, best);
    d.score = best_score;
    d.gain_sum = raw[best];
    return d;
  }

  // Negligible local gain: reposition to the frontier with the best global gain.
  global_.frontiers.erase(global_.current);
  update_frontiers(global_.frontiers, global_.graph, map, fan_);
  const PathSet from_home = shortest_paths(global_.graph, global_.home);
  VertexId target = kNoVertex;
  double target_score = 0.0;
  for (const auto& [v, rec] : global_.frontiers.records()) {
    if (!from_current.reachable(v) || v == global_.current) continue;
    const double score = global_gain(static_cast<double>(rec.gain), from_current.dist[v], from_home.dist[v], budget, gp);
    if (score > target_score) {
      target_score = score;
      target = v;
    }
  }
  if (target == kNoVertex) return home_decision(from_current);
  VeDecision d;
  d.action = VeAction::GlobalReposition;
  d.target = target;
  d.score = target_score;
  d.gain_sum = best != kNoVertex ? raw[best] : 0.0;
  d.path = configurations_of(global_.graph, from_current.path_to(target));
  d.path.back().yaw = global_.frontiers.records().at(target).yaw;
  return d;
}

}  // namespace gplan
