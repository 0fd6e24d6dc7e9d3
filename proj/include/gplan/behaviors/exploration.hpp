#pragma once

#include "gplan/behaviors/global_state.hpp"

namespace gplan {

struct ExplorationParams {
  KernelParams kernel;
  SamplingStrategy sampling;
  GainParams gains;
  double fuse_tolerance = 0.1;  // r_V/2
};

enum class VeAction { LocalPath, GlobalReposition, Home, Done };

const char* to_string(VeAction a);

struct VeDecision {
  VeAction action = VeAction::Done;
  std::vector<Configuration> path;  // starts at the robot
  double score = 0.0;               // J_VE^L or J_VE^G of the chosen path
  double gain_sum = 0.0;            // Σ Γ_VE along the best local path
  VertexId target = kNoVertex;      // global frontier / home vertex
};

/// Volumetric exploration: local paths while they pay off, global repositioning
/// to the best frontier otherwise, then homing.
class ExplorationPlanner {
 public:
  ExplorationPlanner(const EmbodimentSpec& spec, const DepthSensorModel& depth, const ExplorationParams& params);

  VeDecision plan(const Configuration& xi0, const MapView& maps, const MissionBudget& budget, std::uint64_t seed);

  /// Feeds the exploration-direction window with an executed displacement.
  void record_motion(const Vec3& from, const Vec3& to) { direction_.record(from, to); }
  std::optional<Vec3> exploration_direction() const { return direction_.direction(); }

  const GlobalGraphState& global() const { return global_; }
  const PlanGraph& last_local_graph() const { return local_; }
  bool homing() const { return homing_; }
  bool done() const { return done_; }

 private:
  VeDecision home_decision(const PathSet& from_current);

  EmbodimentSpec spec_;
  RayFan fan_;
  ExplorationParams params_;
  GlobalGraphState global_;
  ExplorationDirection direction_;
  PlanGraph local_;
  bool homing_ = false;
  bool done_ = false;
};

}  // namespace gplan
