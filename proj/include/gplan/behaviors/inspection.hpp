#pragma once

#include "gplan/kernel/kernel.hpp"
#include "gplan/sensors/sensors.hpp"

namespace gplan {

struct ViewpointCandidate {
  Configuration xi;
  std::vector<VoxelKey> covered;  // sorted
};

struct CoverageSelection {
  std::vector<std::size_t> chosen;      // candidate indices in pick order
  std::vector<std::size_t> increments;  // marginal coverage of each pick
  std::size_t covered = 0;
};

/// Greedy max-marginal-coverage selection restricted to `targets`; stops when no
/// candidate adds coverage; ties go to the lower index.
CoverageSelection greedy_coverage_selection(const std::vector<ViewpointCandidate>& candidates,
                                            const std::vector<VoxelKey>& targets);

struct InspectionParams {
  int position_samples = 300;  // |P_I| draws
  int yaw_count = 16;
  int pitch_count = 5;

  void validate() const;
};

struct InspectionPlan {
  std::vector<Configuration> path;        // σ_I, empty when nothing is reachable
  std::vector<Configuration> viewpoints;  // reachable selected viewpoints in tour order
  std::size_t selected_coverage = 0;      // targets covered by the reachable selection
  std::size_t candidate_count = 0;
};

/// Single-shot visual inspection of `targets` inside `region`.
InspectionPlan plan_vi(const Configuration& xi0, const MapView& maps, const std::vector<VoxelKey>& targets,
                       const Aabb& region, const CameraSensorModel& camera, const EmbodimentSpec& spec,
                       const KernelParams& kernel, const SamplingStrategy& sampling,
                       const InspectionParams& params, std::uint64_t seed);

/// Occupied voxels whose centers lie inside `region`, sorted.
std::vector<VoxelKey> occupied_in_region(const VoxelMap& map, const Aabb& region);

/// Union of vis_surface over the configurations, restricted to targets.
std::vector<VoxelKey> observed_targets(const VoxelMap& map, const std::vector<Configuration>& path,
                                       const CameraSensorModel& camera, const std::vector<VoxelKey>& targets);

}  // namespace gplan
