#pragma once

#include "gplan/worldsim/mission.hpp"
#include "gplan/worldsim/oracles.hpp"

namespace gplan {

/// Labeled regions holding at least one vertex reachable from the root.
std::size_t regions_covered(const World& world, const PlanGraph& g);

struct GraphBenchRow {
  GraphBuilder builder = GraphBuilder::Basic;
  int samples = 0;  // n_V_max
  int trial = 0;
  double seconds = 0.0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t regions = 0;
};

/// Builds one local graph per (count, trial) over the whole world from its start,
/// on the ground-truth map. `base.region` defaults to the world bounds.
std::vector<GraphBenchRow> run_graph_bench(const World& world, const EmbodimentSpec& spec, KernelParams base,
                                           const SamplingStrategy& sampling, GraphBuilder builder,
                                           const std::vector<int>& counts, int trials, std::uint64_t seed,
                                           double resolution = 0.2);

double median(std::vector<double> values);

struct GraphTrendPoint {
  int samples = 0;
  double basic_seconds = 0.0;   // median
  double basic_regions = 0.0;   // median
  double batch_regions = 0.0;   // median of the largest batch count whose median time fits
  int batch_samples = 0;        // that count, 0 when none fits
};

/// Batch regions at each Basic median construction time. `rows` holds both builders.
std::vector<GraphTrendPoint> graph_trend(const std::vector<GraphBenchRow>& rows);

struct CameraBenchRow {
  bool active = false;
  int trial = 0;
  double coverage = 1.0;
  std::size_t targets = 0;   // |S_I|
  std::size_t residual = 0;  // |S_res|
  std::size_t inspected = 0;
  double path_length = 0.0;
};

/// Underwater VI setup for the camera study: the first compartment of a
/// tank_compartments world plus one wall thickness is the inspection region.
MissionConfig tank_inspection_config(const World& tank);

/// VI missions with a passive and an actuated copy of `config.camera`, one per
/// trial each. Both are scored against S_I minus the active camera's residual.
std::vector<CameraBenchRow> run_camera_bench(const World& world, MissionConfig config, int trials,
                                             std::uint64_t seed, const OracleOptions& oracle = {});

}  // namespace gplan
