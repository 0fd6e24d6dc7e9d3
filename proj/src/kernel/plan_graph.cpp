#include "gplan/kernel/plan_graph.hpp"

#include <algorithm>
#include <queue>

namespace gplan {

VertexId PlanGraph::add_vertex(const Configuration& xi) {
  vertices_.push_back({xi, 0.0, false});
  adjacency_.emplace_back();
  return vertices_.size() - 1;
}

bool PlanGraph::add_edge(VertexId a, VertexId b) {
  if (a == b || a >= vertices_.size() || b >= vertices_.size() || has_edge(a, b)) return false;
  const double len = (vertices_[a].xi.p - vertices_[b].xi.p).norm();
  edges_.push_back({std::min(a, b), std::max(a, b), len});
  adjacency_[a].emplace_back(b, len);
  adjacency_[b].emplace_back(a, len);
  return true;
}

bool PlanGraph::has_edge(VertexId a, VertexId b) const {
  if (a >= adjacency_.size() || b >= adjacency_.size()) return false;
  const auto& small = adjacency_[a].size() <= adjacency_[b].size() ? adjacency_[a] : adjacency_[b];
  const VertexId other = adjacency_[a].size() <= adjacency_[b].size() ? b : a;
  return std::any_of(small.begin(), small.end(), [&](const auto& n) { return n.first == other; });
}

std::vector<VertexId> PlanGraph::within_radius(const Vec3& p, double radius) const {
  std::vector<VertexId> out;
  const double r2 = radius * radius;
  for (VertexId v = 0; v < vertices_.size(); ++v)
    if ((vertices_[v].xi.p - p).squaredNorm() <= r2) out.push_back(v);
  return out;
}

std::optional<VertexId> PlanGraph::nearest(const Vec3& p) const {
  std::optional<VertexId> best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (VertexId v = 0; v < vertices_.size(); ++v) {
    const double d2 = (vertices_[v].xi.p - p).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = v;
    }
  }
  return best;
}

PlanGraph PlanGraph::induced(const std::vector<VertexId>& keep) const {
  PlanGraph out;
  std::vector<VertexId> remap(vertices_.size(), kNoVertex);
  for (VertexId v : keep) {
    remap[v] = out.vertices_.size();
    out.vertices_.push_back(vertices_[v]);
    out.adjacency_.emplace_back();
  }
  for (const auto& e : edges_)
    if (remap[e.a] != kNoVertex && remap[e.b] != kNoVertex) out.add_edge(remap[e.a], remap[e.b]);
  return out;
}

std::vector<VertexId> PathSet::path_to(VertexId v) const {
  if (!reachable(v)) return {};
  std::vector<VertexId> out;
  for (VertexId cur = v; cur != kNoVertex; cur = parent[cur]) out.push_back(cur);
  std::reverse(out.begin(), out.end());
  return out;
}

PathSet shortest_paths(const PlanGraph& g, VertexId root) {
  if (root >= g.vertex_count()) throw std::out_of_range("root not in graph");
  PathSet ps;
  ps.root = root;
  ps.dist.assign(g.vertex_count(), std::numeric_limits<double>::infinity());
  ps.parent.assign(g.vertex_count(), kNoVertex);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  ps.dist[root] = 0.0;
  open.emplace(0.0, root);
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d > ps.dist[u]) continue;
    for (const auto& [v, len] : g.neighbors(u)) {
      const double nd = d + len;
      if (nd < ps.dist[v]) {
        ps.dist[v] = nd;
        ps.parent[v] = u;
        open.emplace(nd, v);
      }
    }
  }
  return ps;
}

std::vector<Configuration> path_configurations(const PlanGraph& g, const PathSet& paths, VertexId v) {
  std::vector<Configuration> out;
  for (VertexId id : paths.path_to(v)) out.push_back(g.vertex(id).xi);
  return out;
}

double path_length(const std::vector<Configuration>& path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) len += (path[i].p - path[i - 1].p).norm();
  return len;
}

}  // namespace gplan
