#include "gplan/behaviors/inspection.hpp"

#include "gplan/behaviors/gains.hpp"

#include <algorithm>
#include <queue>

namespace gplan {

namespace {

std::vector<VoxelKey> sorted_unique(std::vector<VoxelKey> keys) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

}  // namespace

CoverageSelection greedy_coverage_selection(const std::vector<ViewpointCandidate>& candidates,
                                            const std::vector<VoxelKey>& targets) {
  const std::vector<VoxelKey> s = sorted_unique(targets);
  // Candidate coverage as target indices.
  std::vector<std::vector<std::size_t>> cover(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (const auto& key : candidates[c].covered) {
      const auto it = std::lower_bound(s.begin(), s.end(), key);
      if (it != s.end() && *it == key) cover[c].push_back(static_cast<std::size_t>(it - s.begin()));
    }
    std::sort(cover[c].begin(), cover[c].end());
    cover[c].erase(std::unique(cover[c].begin(), cover[c].end()), cover[c].end());
  }

  // Lazy evaluation: stale marginals only overestimate, so a refreshed entry that
  // still beats the next (gain, lower index) bound is the exact greedy pick.
  using Entry = std::pair<std::size_t, std::size_t>;  // (bound, index)
  const auto worse = [](const Entry& a, const Entry& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (std::size_t c = 0; c < candidates.size(); ++c)
    if (!cover[c].empty()) heap.emplace(cover[c].size(), c);

  std::vector<char> done(s.size(), 0);
  CoverageSelection out;
  while (!heap.empty()) {
    const auto [bound, c] = heap.top();
    heap.pop();
    std::size_t gain = 0;
    for (std::size_t t : cover[c]) gain += done[t] ? 0 : 1;
    if (gain == 0) continue;
    if (gain < bound && !heap.empty() && worse(Entry{gain, c}, heap.top())) {
      heap.emplace(gain, c);
      continue;
    }
    for (std::size_t t : cover[c]) done[t] = 1;
    out.chosen.push_back(c);
    out.increments.push_back(gain);
    out.covered += gain;
  }
  return out;
}

void InspectionParams::validate() const {
  if (position_samples < 1 || yaw_count < 1 || pitch_count < 1)
    throw BehaviorError("inspection sample counts must be positive");
}

std::vector<VoxelKey> occupied_in_region(const VoxelMap& map, const Aabb& region) {
  std::vector<VoxelKey> out;
  for (std::size_t idx = 0; idx < map.voxel_count(); ++idx) {
    if (map.state_unchecked(idx) != VoxelState::Occupied) continue;
    const VoxelKey key = map.key_at(idx);
    if (region.contains(map.center_of(key))) out.push_back(key);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VoxelKey> observed_targets(const VoxelMap& map, const std::vector<Configuration>& path,
                                       const CameraSensorModel& camera, const std::vector<VoxelKey>& targets) {
  const std::vector<VoxelKey> s = sorted_unique(targets);
  std::vector<VoxelKey> seen;
  for (const auto& xi : path) {
    const auto v = vis_surface(map, xi, camera, s);
    seen.insert(seen.end(), v.begin(), v.end());
  }
  return sorted_unique(std::move(seen));
}

InspectionPlan plan_vi(const Configuration& xi0, const MapView& maps, const std::vector<VoxelKey>& targets,
                       const Aabb& region, const CameraSensorModel& camera, const EmbodimentSpec& spec,
                       const KernelParams& kernel, const SamplingStrategy& sampling,
                       const InspectionParams& params, std::uint64_t seed) {
  camera.validate();
  params.validate();
  InspectionPlan plan;
  const VoxelMap& map = *maps.voxels;
  const std::vector<VoxelKey> s = sorted_unique(targets);
  const Aabb box = region.intersect(map.bounds());
  if (s.empty() || box.empty()) return plan;

  // Viewpoint candidates from admissible positions inside the camera's range band.
  std::vector<ViewpointCandidate> candidates;
  PositionSampler sampler({SamplingKind::Uniform}, box, box.center(), seed);
  for (int n = 0; n < params.position_samples; ++n) {
    const auto check = validate_vertex(spec, maps, Configuration(sampler.next(), 0.0));
    if (!check.ok()) continue;
    const Vec3 p = check.accepted->p;
    const double sdf = map.sdf_at(p);
    if (sdf < camera.min_range || sdf > camera.max_range) continue;
    const auto shell = line_of_sight_targets(map, p, camera, s);
    if (shell.empty()) continue;
    for (auto& view : orientation_set(map, p, camera, shell, params.yaw_count, params.pitch_count)) {
      const std::optional<double> pitch = camera.pitch_actuated ? std::optional<double>(view.pitch) : std::nullopt;
      candidates.push_back({Configuration(p, view.yaw, pitch), std::move(view.visible)});
    }
  }
  plan.candidate_count = candidates.size();
  const CoverageSelection selection = greedy_coverage_selection(candidates, s);
  if (selection.chosen.empty()) return plan;

  // Roadmap over the region (grown to include the robot), then attach the viewpoints.
  KernelParams kp = kernel;
  Aabb hull{box.min.cwiseMin(xi0.p), box.max.cwiseMax(xi0.p)};
  kp.region = hull;
  PlanGraph g = build_local_graph(xi0, maps, spec, kp, sampling, seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<VertexId> vp_ids;
  for (std::size_t c : selection.chosen) {
    const Configuration& xi = candidates[c].xi;
    const auto near = g.within_radius(xi.p, kp.e_max);
    const VertexId id = g.add_vertex(xi);
    for (VertexId u : near)
      if ((g.position(u) - xi.p).norm() > 1e-9 && validate_edge(spec, maps, g.vertex(u).xi, xi)) g.add_edge(u, id);
    vp_ids.push_back(id);
  }

  const PathSet from_root = shortest_paths(g, 0);
  std::vector<VertexId> nodes{0};
  std::vector<std::size_t> node_candidate{0};
  for (std::size_t i = 0; i < vp_ids.size(); ++i)
    if (from_root.reachable(vp_ids[i])) {
      nodes.push_back(vp_ids[i]);
      node_candidate.push_back(selection.chosen[i]);
    }
  if (nodes.size() == 1) return plan;

  std::vector<PathSet> trees;
  trees.reserve(nodes.size());
  for (VertexId v : nodes) trees.push_back(v == 0 ? from_root : shortest_paths(g, v));
  std::vector<std::vector<double>> dist(nodes.size(), std::vector<double>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j) dist[i][j] = trees[i].dist[nodes[j]];
  const auto tour = solve_tsp(dist, 0);

  plan.path.push_back(g.vertex(0).xi);
  std::vector<VoxelKey> covered;
  for (std::size_t t = 1; t < tour.size(); ++t) {
    const auto ids = trees[tour[t - 1]].path_to(nodes[tour[t]]);
    for (std::size_t k = 1; k < ids.size(); ++k) plan.path.push_back(g.vertex(ids[k]).xi);
    plan.viewpoints.push_back(g.vertex(nodes[tour[t]]).xi);
    const auto& cov = candidates[node_candidate[tour[t]]].covered;
    covered.insert(covered.end(), cov.begin(), cov.end());
  }
  plan.selected_coverage = sorted_unique(std::move(covered)).size();
  return plan;
}

}  // namespace gplan
