#include "gplan/worldsim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <map>

namespace gplan {

std::size_t regions_covered(const World& world, const PlanGraph& g) {
  if (g.empty()) return 0;
  const PathSet sp = shortest_paths(g, 0);
  std::vector<char> hit(world.regions.size(), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!sp.reachable(v)) continue;
    if (const auto r = world.region_of(g.position(v))) hit[*r] = 1;
  }
  return static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
}

std::vector<GraphBenchRow> run_graph_bench(const World& world, const EmbodimentSpec& spec, KernelParams base,
                                           const SamplingStrategy& sampling, GraphBuilder builder,
                                           const std::vector<int>& counts, int trials, std::uint64_t seed,
                                           double resolution) {
  if (!world.start) throw WorldError("world has no start");
  const VoxelMap truth = rasterize(world, resolution);
  const MapView maps(truth);
  if (!base.region) base.region = world.bounds;
  base.builder = builder;
  const Configuration xi0(*world.start, 0.0);
  std::vector<GraphBenchRow> rows;
  for (int n : counts)
    for (int trial = 0; trial < trials; ++trial) {
      KernelParams kp = base;
      kp.max_vertices = n;
      const std::uint64_t s = splitmix64(seed ^ (static_cast<std::uint64_t>(n) << 32) ^ static_cast<std::uint64_t>(trial));
      const auto t0 = std::chrono::steady_clock::now();
      const PlanGraph g = build_local_graph(xi0, maps, spec, kp, sampling, s);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rows.push_back({builder, n, trial, secs, g.vertex_count(), g.edge_count(), regions_covered(world, g)});
    }
  return rows;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

std::vector<GraphTrendPoint> graph_trend(const std::vector<GraphBenchRow>& rows) {
  struct Stats {
    std::vector<double> seconds, regions;
  };
  std::map<int, Stats> basic, batch;
  for (const auto& r : rows) {
    Stats& s = (r.builder == GraphBuilder::Basic ? basic : batch)[r.samples];
    s.seconds.push_back(r.seconds);
    s.regions.push_back(static_cast<double>(r.regions));
  }
  std::vector<GraphTrendPoint> out;
  for (const auto& [n, s] : basic) {
    GraphTrendPoint p;
    p.samples = n;
    p.basic_seconds = median(s.seconds);
    p.basic_regions = median(s.regions);
    for (const auto& [m, b] : batch)
      if (median(b.seconds) <= p.basic_seconds && m > p.batch_samples) {
        p.batch_samples = m;
        p.batch_regions = median(b.regions);
      }
    out.push_back(p);
  }
  return out;
}

MissionConfig tank_inspection_config(const World& tank) {
  if (tank.regions.empty()) throw WorldError("world has no regions");
  MissionConfig cfg;
  cfg.behavior = Behavior::VI;
  cfg.embodiment = EmbodimentSpec::underwater(Vec3(0.6, 0.6, 0.4), 2.0);
  const Aabb& comp = tank.regions[0].box;
  cfg.inspection_region = Aabb{comp.min - Vec3::Constant(0.4), comp.max + Vec3::Constant(0.4)};
  return cfg;
}

std::vector<CameraBenchRow> run_camera_bench(const World& world, MissionConfig config, int trials,
                                             std::uint64_t seed, const OracleOptions& oracle) {
  config.behavior = Behavior::VI;
  CameraSensorModel active = config.camera;
  active.pitch_actuated = true;
  OracleOptions oo = oracle;
  oo.resolution = config.voxel_resolution;
  if (config.inspection_region && !oo.surface_region) oo.surface_region = config.inspection_region;
  if (world.start && !oo.reachable_from) oo.reachable_from = *world.start;
  const std::vector<VoxelKey> residual = residual_surface_oracle(world, config.embodiment, active, oo);

  std::vector<CameraBenchRow> rows;
  for (bool is_active : {false, true}) {
    MissionConfig cfg = config;
    cfg.camera.pitch_actuated = is_active;
    for (int trial = 0; trial < trials; ++trial) {
      const MissionResult r = run_mission(world, cfg, splitmix64(seed + static_cast<std::uint64_t>(trial)));
      if (r.status == MissionStatus::Failed) throw WorldError("camera bench mission failed: " + r.message);
      const MetricsLog m = compute_metrics(r.state, residual);
      rows.push_back({is_active, trial, m.coverage, r.state.inspection_targets.size(), residual.size(),
                      r.state.inspected.size(), r.state.path_length});
    }
  }
  return rows;
}

}  // namespace gplan
