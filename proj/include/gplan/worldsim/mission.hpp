#pragma once

#include "gplan/behaviors/exploration.hpp"
#include "gplan/behaviors/inspection.hpp"
#include "gplan/behaviors/target_reach.hpp"
#include "gplan/worldsim/world.hpp"

#include <iosfwd>
#include <string>

namespace gplan {

/// Casts the fan from ξ through the ground-truth grid and writes what it sees
/// into `map` (same geometry as `truth`): crossed voxels Free, the hit voxel
/// Occupied. Returns the number of voxels that changed.
std::size_t simulate_depth_scan(const VoxelMap& truth, VoxelMap& map, const Configuration& xi, const RayFan& fan,
                                bool recompute_sdf = true);
/// Convenience overload rasterizing the world at the map's resolution.
std::size_t simulate_depth_scan(const World& world, VoxelMap& map, const Configuration& xi,
                                const DepthSensorModel& depth);

/// All-Unknown map with the geometry of `truth`.
VoxelMap blank_like(const VoxelMap& truth);

/// Terrain sensing for ground robots: exact heightfield when the world has one,
/// otherwise the top of the first solid voxel below `z_from` in each column.
void update_elevation(ElevationMap& h, const World& world, const VoxelMap& truth, const Vec3& robot,
                      double radius);

enum class Behavior { VE, VI, TR, VEThenVI };

const char* to_string(Behavior b);
Behavior parse_behavior(const std::string& s);

enum class MissionStatus { Done, Reached, Unreachable, Failed };

const char* to_string(MissionStatus s);

struct MissionConfig {
  Behavior behavior = Behavior::VE;
  EmbodimentSpec embodiment;
  DepthSensorModel depth;
  CameraSensorModel camera;
  ExplorationParams exploration;
  TargetReachParams target;          // target position defaults to the world's
  bool target_from_world = true;
  InspectionParams inspection;
  std::optional<Aabb> inspection_region;  // B_VI, world bounds when unset
  MissionBudget budget;
  double voxel_resolution = 0.2;     // r_V
  double elevation_resolution = 0.2; // r_H
  Vec2 elevation_window = Vec2(40.0, 40.0);
  double scan_interval = 0.5;        // Δt_scan, s
  double replan_fraction = 0.75;
  int max_iterations = 400;
  int graph_snapshot_interval = 0;   // keep the global graph every n iterations; 0 = never
  std::optional<Vec3> start;         // world start when unset
  double start_yaw = 0.0;

  void validate() const;
};

struct MetricsSample {
  double t = 0.0;
  std::size_t explored_voxels = 0;
  double explored_m3 = 0.0;
  double path_length = 0.0;
  std::string event;
};

struct MissionEvent {
  double t = 0.0;
  std::string tag;
};

struct SimState {
  Configuration robot;
  double t = 0.0;
  VoxelMap map;
  std::optional<ElevationMap> elevation;
  PlanGraph global_graph;
  VertexId home = kNoVertex;
  std::vector<Configuration> path_log;
  std::vector<MissionEvent> events;
  std::vector<MetricsSample> samples;
  double path_length = 0.0;
  int iterations = 0;
  std::size_t replay_violations = 0;   // executed segments failing re-validation
  std::vector<VoxelKey> inspection_targets;  // S_I
  std::vector<VoxelKey> inspected;           // S_I seen along the executed path
  std::vector<std::pair<int, PlanGraph>> graph_snapshots;  // (iteration, global graph)

  explicit SimState(VoxelMap m) : robot(Vec3::Zero(), 0.0), map(std::move(m)) {}
};

struct MetricsLog {
  std::vector<MetricsSample> samples;
  double auc = 0.0;        // m³·s
  double coverage = 1.0;   // inspection coverage; 1 for an empty denominator
  double duration = 0.0;
  double path_length = 0.0;
};

struct MissionResult {
  MissionStatus status = MissionStatus::Failed;
  std::string message;
  SimState state;
  MetricsLog metrics;
};

MissionResult run_mission(const World& world, const MissionConfig& config, std::uint64_t seed);

/// Trapezoidal AUC of explored volume; coverage = |inspected ∩ (S_I \ S_res)| / |S_I \ S_res|.
MetricsLog compute_metrics(const SimState& state, const std::vector<VoxelKey>& residual_surface = {});
double trapezoid_auc(const std::vector<MetricsSample>& samples);

/// `t,explored_voxels,explored_m3,path_len_m,event`
void write_metrics_csv(std::ostream& os, const MetricsLog& log);

/// `v id x y z yaw gain frontier` lines, then `e a b length` lines.
void write_plan_graph(std::ostream& os, const PlanGraph& g);

/// Stream of 64-bit seeds: splitmix64 of the state.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace gplan
