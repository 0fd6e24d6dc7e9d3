#pragma once

#include "gplan/kernel/configuration.hpp"

#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gplan {

using VertexId = std::size_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

struct Vertex {
  Configuration xi;
  double gain = 0.0;       // cached Γ, meaning chosen by the behavior
  bool frontier = false;
};

struct Edge {
  VertexId a = 0;
  VertexId b = 0;
  double length = 0.0;
};

/// Undirected graph of configurations. Edge length is always the Euclidean
/// distance between endpoint positions; self-loops and duplicates are refused.
class PlanGraph {
 public:
  VertexId add_vertex(const Configuration& xi);
  /// Returns false (and changes nothing) for self-loops, duplicates or unknown ids.
  bool add_edge(VertexId a, VertexId b);
  bool has_edge(VertexId a, VertexId b) const;

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return vertices_.empty(); }

  const Vertex& vertex(VertexId id) const { return vertices_.at(id); }
  Vertex& vertex(VertexId id) { return vertices_.at(id); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// (neighbour, length) pairs in insertion order.
  const std::vector<std::pair<VertexId, double>>& neighbors(VertexId id) const { return adjacency_.at(id); }
  const Vec3& position(VertexId id) const { return vertices_[id].xi.p; }

  /// Vertices with ‖p − v‖ ≤ radius, ascending id.
  std::vector<VertexId> within_radius(const Vec3& p, double radius) const;
  /// Closest vertex (lowest id on ties); nullopt for an empty graph.
  std::optional<VertexId> nearest(const Vec3& p) const;

  /// Subgraph on `keep` (renumbered in the given order) with all edges among them.
  PlanGraph induced(const std::vector<VertexId>& keep) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<VertexId, double>>> adjacency_;
};

/// Single-source shortest paths over a PlanGraph.
struct PathSet {
  VertexId root = 0;
  std::vector<double> dist;      // +inf when unreachable
  std::vector<VertexId> parent;  // kNoVertex for root / unreachable

  bool reachable(VertexId v) const { return v < dist.size() && dist[v] < std::numeric_limits<double>::infinity(); }
  /// Vertex ids root..v; empty when v is unreachable.
  std::vector<VertexId> path_to(VertexId v) const;
};

/// Dijkstra. Throws std::out_of_range("root not in graph") for a missing root.
PathSet shortest_paths(const PlanGraph& g, VertexId root);

/// Configurations along the path root..v.
std::vector<Configuration> path_configurations(const PlanGraph& g, const PathSet& paths, VertexId v);
double path_length(const std::vector<Configuration>& path);

}  // namespace gplan
