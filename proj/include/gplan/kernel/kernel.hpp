#pragma once

#include "gplan/embodiment/embodiment.hpp"
#include "gplan/kernel/configuration.hpp"
#include "gplan/kernel/plan_graph.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace gplan {

class KernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SamplingKind { Uniform, Gaussian, Hybrid };
enum class GraphBuilder { Basic, Batch };

const char* to_string(SamplingKind k);
SamplingKind parse_sampling_kind(const std::string& s);
const char* to_string(GraphBuilder b);
GraphBuilder parse_graph_builder(const std::string& s);

struct SamplingStrategy {
  SamplingKind kind = SamplingKind::Uniform;
  Vec3 sigma = Vec3::Zero();  // Gaussian std dev per axis; zero means box/6
  double eta = 50.0;          // Hybrid: percent of Gaussian draws

  void validate() const;
};

struct KernelParams {
  Vec3 local_box = Vec3(8.0, 8.0, 3.0);  // B_L dimensions, centered on the robot
  double e_max = 1.5;
  int max_vertices = 400;
  int max_edges = 7000;
  double tracking_distance = 4.0;  // d_g
  GraphBuilder builder = GraphBuilder::Basic;
  int batch_size = 0;               // 0: max_vertices per round
  int max_attempts_per_vertex = 20; // Basic: sample budget = this * max_vertices
  int max_batch_rounds = 5;
  double cluster_radius = 0.0;      // 0: 2 * e_max
  std::optional<Aabb> region;       // sample here instead of B_L around the robot

  void validate() const;
  double effective_cluster_radius() const { return cluster_radius > 0.0 ? cluster_radius : 2.0 * e_max; }
};

/// Draws positions from a sampling strategy inside `box`, centered on `center`
/// for the Gaussian part. Deterministic per seed.
class PositionSampler {
 public:
  PositionSampler(const SamplingStrategy& strategy, const Aabb& box, const Vec3& center, std::uint64_t seed);

  Vec3 next();

 private:
  Vec3 uniform();
  Vec3 gaussian();

  SamplingStrategy strategy_;
  Aabb box_;
  Vec3 center_;
  Vec3 sigma_;
  std::mt19937_64 rng_;
  std::uint64_t drawn_ = 0;
};

std::vector<Configuration> sample_configurations(const SamplingStrategy& strategy, const Aabb& box,
                                                 const Configuration& xi0, int count, std::uint64_t seed);

/// B_L centered on p (or the fixed region when set), clipped to the map.
Aabb local_box(const KernelParams& params, const VoxelMap& map, const Vec3& p);

PlanGraph build_local_graph_basic(const Configuration& xi0, const MapView& maps, const EmbodimentSpec& spec,
                                  const KernelParams& params, const SamplingStrategy& strategy, std::uint64_t seed);
PlanGraph build_local_graph_batch(const Configuration& xi0, const MapView& maps, const EmbodimentSpec& spec,
                                  const KernelParams& params, const SamplingStrategy& strategy, std::uint64_t seed);
/// Dispatches on params.builder.
PlanGraph build_local_graph(const Configuration& xi0, const MapView& maps, const EmbodimentSpec& spec,
                            const KernelParams& params, const SamplingStrategy& strategy, std::uint64_t seed);

/// Keeps the root paths of leaves farther than cluster_radius from everything
/// already kept (leaves visited by decreasing path length). Vertex 0 is the root;
/// remaining vertices keep their relative order. Root paths of `must_keep`
/// vertices are retained before clustering starts.
PlanGraph extract_sparse_subgraph(const PlanGraph& g, const PathSet& paths, double cluster_radius,
                                  const std::vector<VertexId>& must_keep = {});

/// Adds `sparse` into `global`, fusing vertices closer than fuse_tolerance and
/// cross-linking new vertices to global vertices within e_max. Returns the global
/// id of each sparse vertex.
std::vector<VertexId> merge_into_global(PlanGraph& global, const PlanGraph& sparse, double e_max,
                                        double fuse_tolerance, const MapView& maps, const EmbodimentSpec& spec);

/// Open tour from `start` visiting all nodes: nearest neighbour, then 2-opt and
/// Or-opt until no move improves. Throws KernelError("viewpoint unreachable") on
/// an infinite entry.
std::vector<std::size_t> solve_tsp(const std::vector<std::vector<double>>& dist, std::size_t start);
double tour_length(const std::vector<std::vector<double>>& dist, const std::vector<std::size_t>& order);

/// Point at arc length `s` along a polyline (clamped to its ends).
Vec3 point_along(const std::vector<Vec3>& polyline, double s);
/// Arc length of the polyline point closest to p.
double project_onto(const std::vector<Vec3>& polyline, const Vec3& p);
double polyline_length(const std::vector<Vec3>& polyline);

struct TrackingResult {
  std::vector<Configuration> path;  // starts at the root
  Vec3 goal = Vec3::Zero();         // p_g
};

/// Local path toward the point d_g ahead of the robot's projection on σ_G.
/// Throws KernelError("locally trapped") when the local graph has no vertex
/// besides the root.
TrackingResult track_global_path(const std::vector<Vec3>& sigma_g, const Configuration& xi0, const MapView& maps,
                                 const EmbodimentSpec& spec, const KernelParams& params,
                                 const SamplingStrategy& strategy, double d_g, std::uint64_t seed);

}  // namespace gplan
