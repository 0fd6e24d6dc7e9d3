#include "gplan/kernel/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gplan {

PlanGraph extract_sparse_subgraph(const PlanGraph& g, const PathSet& paths, double cluster_radius,
                                  const std::vector<VertexId>& must_keep) {
  const std::size_t n = g.vertex_count();
  std::vector<char> has_child(n, 0);
  for (VertexId v = 0; v < n; ++v)
    if (paths.parent[v] != kNoVertex) has_child[paths.parent[v]] = 1;
  std::vector<VertexId> leaves;
  for (VertexId v = 0; v < n; ++v)
    if (paths.reachable(v) && !has_child[v]) leaves.push_back(v);
  std::sort(leaves.begin(), leaves.end(), [&](VertexId a, VertexId b) {
    return paths.dist[a] != paths.dist[b] ? paths.dist[a] > paths.dist[b] : a < b;
  });

  std::vector<char> kept(n, 0);
  std::vector<VertexId> kept_list{paths.root};
  kept[paths.root] = 1;
  const auto keep_path = [&](VertexId leaf) {
    for (VertexId v : paths.path_to(leaf))
      if (!kept[v]) {
        kept[v] = 1;
        kept_list.push_back(v);
      }
  };
  for (VertexId v : must_keep) keep_path(v);
  const double r2 = cluster_radius * cluster_radius;
  for (VertexId leaf : leaves) {
    const Vec3& p = g.position(leaf);
    const bool covered = std::any_of(kept_list.begin(), kept_list.end(),
                                     [&](VertexId k) { return (g.position(k) - p).squaredNorm() <= r2; });
    if (!covered) keep_path(leaf);
  }

  // Root first, then ascending id; only tree edges survive.
  std::vector<VertexId> order{paths.root};
  for (VertexId v = 0; v < n; ++v)
    if (kept[v] && v != paths.root) order.push_back(v);
  std::vector<VertexId> remap(n, kNoVertex);
  PlanGraph out;
  for (VertexId v : order) {
    remap[v] = out.add_vertex(g.vertex(v).xi);
    out.vertex(remap[v]).gain = g.vertex(v).gain;
    out.vertex(remap[v]).frontier = g.vertex(v).frontier;
  }
  for (VertexId v : order)
    if (paths.parent[v] != kNoVertex) out.add_edge(remap[paths.parent[v]], remap[v]);
  return out;
}

std::vector<VertexId> merge_into_global(PlanGraph& global, const PlanGraph& sparse, double e_max,
                                        double fuse_tolerance, const MapView& maps, const EmbodimentSpec& spec) {
  std::vector<VertexId> remap(sparse.vertex_count(), kNoVertex);
  std::vector<char> fused(sparse.vertex_count(), 0);
  const std::size_t old_count = global.vertex_count();
  for (VertexId v = 0; v < sparse.vertex_count(); ++v) {
    const auto near = global.nearest(sparse.position(v));
    if (near && (global.position(*near) - sparse.position(v)).norm() <= fuse_tolerance) {
      remap[v] = *near;
      fused[v] = 1;
    } else {
      remap[v] = global.add_vertex(sparse.vertex(v).xi);
      global.vertex(remap[v]).gain = sparse.vertex(v).gain;
      global.vertex(remap[v]).frontier = sparse.vertex(v).frontier;
    }
  }
  for (const auto& e : sparse.edges()) {
    const VertexId a = remap[e.a], b = remap[e.b];
    if (a == b || global.has_edge(a, b)) continue;
    // Edges between unfused vertices were validated at the same endpoints already.
    if ((fused[e.a] || fused[e.b]) && !validate_edge(spec, maps, global.vertex(a).xi, global.vertex(b).xi)) continue;
    global.add_edge(a, b);
  }
  for (VertexId v = old_count; v < global.vertex_count(); ++v) {
    for (VertexId u : global.within_radius(global.position(v), e_max)) {
      if (u == v || global.has_edge(u, v)) continue;
      if ((global.position(u) - global.position(v)).norm() < 1e-9) continue;
      if (validate_edge(spec, maps, global.vertex(u).xi, global.vertex(v).xi)) global.add_edge(u, v);
    }
  }
  return remap;
}

double tour_length(const std::vector<std::vector<double>>& dist, const std::vector<std::size_t>& order) {
  double len = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) len += dist[order[i - 1]][order[i]];
  return len;
}

std::vector<std::size_t> solve_tsp(const std::vector<std::vector<double>>& dist, std::size_t start) {
  const std::size_t n = dist.size();
  if (n == 0) return {};
  if (start >= n) throw KernelError("tsp start out of range");
  for (const auto& row : dist) {
    if (row.size() != n) throw KernelError("tsp matrix must be square");
    for (double d : row)
      if (!std::isfinite(d)) throw KernelError("viewpoint unreachable");
  }
  // Nearest-neighbour construction.
  std::vector<std::size_t> tour{start};
  std::vector<char> used(n, 0);
  used[start] = 1;
  while (tour.size() < n) {
    const std::size_t last = tour.back();
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j)
      if (!used[j] && (best == n || dist[last][j] < dist[last][best])) best = j;
    used[best] = 1;
    tour.push_back(best);
  }
  if (n <= 2) return tour;

  const double eps = 1e-12;
  auto d = [&](std::size_t i, std::size_t j) { return dist[tour[i]][tour[j]]; };
  bool improved = true;
  while (improved) {
    improved = false;
    // 2-opt: reverse tour[i..j]; the open end has no closing edge.
    for (std::size_t i = 1; i + 1 < n && !improved; ++i)
      for (std::size_t j = i + 1; j < n && !improved; ++j) {
        const double before = d(i - 1, i) + (j + 1 < n ? d(j, j + 1) : 0.0);
        const double after = d(i - 1, j) + (j + 1 < n ? d(i, j + 1) : 0.0);
        if (after < before - eps) {
          std::reverse(tour.begin() + static_cast<long>(i), tour.begin() + static_cast<long>(j) + 1);
          improved = true;
        }
      }
    if (improved) continue;
    // Or-opt: move a segment of 1..3 nodes (possibly reversed) elsewhere.
    const double current = tour_length(dist, tour);
    for (std::size_t len = 1; len <= 3 && !improved; ++len)
      for (std::size_t i = 1; i + len <= n && !improved; ++i) {
        std::vector<std::size_t> seg(tour.begin() + static_cast<long>(i), tour.begin() + static_cast<long>(i + len));
        std::vector<std::size_t> rest(tour.begin(), tour.begin() + static_cast<long>(i));
        rest.insert(rest.end(), tour.begin() + static_cast<long>(i + len), tour.end());
        for (std::size_t pos = 1; pos <= rest.size() && !improved; ++pos)
          for (int rev = 0; rev < 2 && !improved; ++rev) {
            if (pos == i && rev == 0) continue;
            std::vector<std::size_t> cand(rest.begin(), rest.begin() + static_cast<long>(pos));
            if (rev) cand.insert(cand.end(), seg.rbegin(), seg.rend());
            else cand.insert(cand.end(), seg.begin(), seg.end());
            cand.insert(cand.end(), rest.begin() + static_cast<long>(pos), rest.end());
            if (tour_length(dist, cand) < current - eps) {
              tour = std::move(cand);
              improved = true;
            }
          }
      }
  }
  return tour;
}

double polyline_length(const std::vector<Vec3>& polyline) {
  double len = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) len += (polyline[i] - polyline[i - 1]).norm();
  return len;
}

Vec3 point_along(const std::vector<Vec3>& polyline, double s) {
  if (polyline.empty()) throw KernelError("empty path");
  if (s <= 0.0) return polyline.front();
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    const double seg = (polyline[i] - polyline[i - 1]).norm();
    if (s <= seg && seg > 0.0) return polyline[i - 1] + (polyline[i] - polyline[i - 1]) * (s / seg);
    s -= seg;
  }
  return polyline.back();
}

double project_onto(const std::vector<Vec3>& polyline, const Vec3& p) {
  if (polyline.empty()) throw KernelError("empty path");
  double best_d2 = (polyline.front() - p).squaredNorm(), best_s = 0.0, acc = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    const Vec3 a = polyline[i - 1], ab = polyline[i] - a;
    const double seg2 = ab.squaredNorm();
    const double t = seg2 > 0.0 ? std::clamp((p - a).dot(ab) / seg2, 0.0, 1.0) : 0.0;
    const double d2 = (a + t * ab - p).squaredNorm();
    const double seg = std::sqrt(seg2);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_s = acc + t * seg;
    }
    acc += seg;
  }
  return best_s;
}

TrackingResult track_global_path(const std::vector<Vec3>& sigma_g, const Configuration& xi0, const MapView& maps,
                                 const EmbodimentSpec& spec, const KernelParams& params,
                                 const SamplingStrategy& strategy, double d_g, std::uint64_t seed) {
  if (sigma_g.empty()) throw KernelError("empty global path");
  TrackingResult out;
  out.goal = point_along(sigma_g, project_onto(sigma_g, xi0.p) + d_g);
  const PlanGraph g = build_local_graph(xi0, maps, spec, params, strategy, seed);
  if (g.vertex_count() <= 1) throw KernelError("locally trapped");
  const PathSet sp = shortest_paths(g, 0);
  VertexId best = 0;
  double best_d = (g.position(0) - out.goal).norm();
  for (VertexId v = 1; v < g.vertex_count(); ++v) {
    if (!sp.reachable(v)) continue;
    const double d = (g.position(v) - out.goal).norm();
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  out.path = path_configurations(g, sp, best);
  return out;
}

}  // namespace gplan
