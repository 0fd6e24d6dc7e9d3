#include "gplan/kernel/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace gplan {

namespace {

Configuration admissible_root(const Configuration& xi0, const MapView& maps, const EmbodimentSpec& spec) {
  const auto root = validate_vertex(spec, maps, xi0);
  if (!root.ok()) throw KernelError("root not admissible");
  return *root.accepted;
}

double heading(const Vec3& from, const Vec3& to, double fallback) {
  const Vec2 d = (to - from).head<2>();
  return d.squaredNorm() > 1e-18 ? std::atan2(d.y(), d.x()) : fallback;
}

// Keeps only vertices connected to vertex 0.
PlanGraph prune_to_root(const PlanGraph& g) {
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    for (const auto& [v, len] : g.neighbors(u))
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  std::vector<VertexId> keep;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (seen[v]) keep.push_back(v);
  return keep.size() == g.vertex_count() ? g : g.induced(keep);
}

}  // namespace

PlanGraph build_local_graph_basic(const Configuration& xi0, const MapView& maps, const EmbodimentSpec& spec,
                                  const KernelParams& params, const SamplingStrategy& strategy, std::uint64_t seed) {
  params.validate();
  PlanGraph g;
  g.add_vertex(admissible_root(xi0, maps, spec));
  const Aabb box = local_box(params, *maps.voxels, xi0.p);
  if (box.empty()) return g;
  PositionSampler sampler(strategy, box, xi0.p, seed);
  const long attempts = static_cast<long>(params.max_attempts_per_vertex) * params.max_vertices;
  for (long attempt = 0; attempt < attempts; ++attempt) {
    if (g.vertex_count() >= static_cast<std::size_t>(params.max_vertices) ||
        g.edge_count() >= static_cast<std::size_t>(params.max_edges))
      break;
    Vec3 s = sampler.next();
    const VertexId near = *g.nearest(s);
    const Vec3& pn = g.position(near);
    const double d = (s - pn).norm();
    if (d < 1e-9) continue;
    if (d > params.e_max) s = pn + (s - pn) * (params.e_max / d);
    const auto check = validate_vertex(spec, maps, Configuration(s, heading(pn, s, g.vertex(near).xi.yaw), xi0.pitch));
    if (!check.ok()) continue;
    const Configuration xi = *check.accepted;

    std::vector<std::pair<double, VertexId>> links;
    for (VertexId v : g.within_radius(xi.p, params.e_max)) {
      const double dv = (g.position(v) - xi.p).norm();
      if (dv < 1e-9) continue;
      if (validate_edge(spec, maps, g.vertex(v).xi, xi)) links.emplace_back(dv, v);
    }
    if (links.empty()) continue;
    // Shortest links first when the edge budget cannot take them all.
    std::sort(links.begin(), links.end());
    const std::size_t budget = static_cast<std::size_t>(params.max_edges) - g.edge_count();
    if (links.size() > budget) links.resize(budget);
    const VertexId id = g.add_vertex(xi);
    for (const auto& [dv, v] : links) g.add_edge(v, id);
  }
  return g;
}

PlanGraph build_local_graph_batch(const Configuration& xi0, const MapView& maps, const EmbodimentSpec& spec,
                                  const KernelParams& params, const SamplingStrategy& strategy, std::uint64_t seed) {
  params.validate();
  PlanGraph g;
  g.add_vertex(admissible_root(xi0, maps, spec));
  const Aabb box = local_box(params, *maps.voxels, xi0.p);
  if (box.empty() || params.max_edges == 0) return g;
  PositionSampler sampler(strategy, box, xi0.p, seed);
  const int batch = params.batch_size > 0 ? params.batch_size : params.max_vertices;
  for (int round = 0; round < params.max_batch_rounds; ++round) {
    if (g.vertex_count() >= static_cast<std::size_t>(params.max_vertices) ||
        g.edge_count() >= static_cast<std::size_t>(params.max_edges))
      break;
    const std::size_t first_new = g.vertex_count();
    // A batch is `batch` admissible samples; draws are capped like Basic's.
    const long draws = static_cast<long>(params.max_attempts_per_vertex) * batch;
    int accepted = 0;
    for (long n = 0; n < draws && accepted < batch && g.vertex_count() < static_cast<std::size_t>(params.max_vertices);
         ++n) {
      const auto check = validate_vertex(spec, maps, Configuration(sampler.next(), xi0.yaw, xi0.pitch));
      if (!check.ok()) continue;
      g.add_vertex(*check.accepted);
      ++accepted;
    }
    for (VertexId v = first_new; v < g.vertex_count(); ++v) {
      for (VertexId u : g.within_radius(g.position(v), params.e_max)) {
        if (u >= v) break;
        if (g.edge_count() >= static_cast<std::size_t>(params.max_edges)) break;
        if ((g.position(u) - g.position(v)).norm() < 1e-9) continue;
        if (validate_edge(spec, maps, g.vertex(u).xi, g.vertex(v).xi)) g.add_edge(u, v);
      }
    }
    g = prune_to_root(g);
  }
  // Travel-aligned yaw from the shortest-path parent.
  const PathSet sp = shortest_paths(g, 0);
  std::vector<VertexId> order(g.vertex_count());
  for (VertexId v = 0; v < order.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return sp.dist[a] < sp.dist[b]; });
  for (VertexId v : order) {
    if (sp.parent[v] == kNoVertex) continue;
    const auto& parent = g.vertex(sp.parent[v]).xi;
    g.vertex(v).xi.yaw = heading(parent.p, g.position(v), parent.yaw);
  }
  return g;
}

PlanGraph build_local_graph(const Configuration& xi0, const MapView& maps, const EmbodimentSpec& spec,
                            const KernelParams& params, const SamplingStrategy& strategy, std::uint64_t seed) {
  return params.builder == GraphBuilder::Basic ? build_local_graph_basic(xi0, maps, spec, params, strategy, seed)
                                               : build_local_graph_batch(xi0, maps, spec, params, strategy, seed);
}

}  // namespace gplan
