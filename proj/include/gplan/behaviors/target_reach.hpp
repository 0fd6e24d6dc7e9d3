#pragma once

#include "gplan/behaviors/exploration.hpp"

namespace gplan {

struct TargetReachParams {
  Vec3 target = Vec3::Zero();  // p_t
  double reach_radius = 0.5;   // ρ_reach
  double target_radius = 1.0;  // ρ_t
  double lookahead = 3.0;      // ρ_lh
  int stall_limit = 5;         // n_stall

  void validate() const;
};

enum class TrAction { LocalPath, Reached, Unreachable };

const char* to_string(TrAction a);

struct TrDecision {
  TrAction action = TrAction::LocalPath;
  std::vector<Configuration> path;
  VertexId guide = kNoVertex;   // ν_best on the global graph
  bool guide_is_frontier = false;
  bool frontier_switch = false; // guide moved to a frontier in a different direction
  bool stalled = false;
  Vec3 lookahead = Vec3::Zero();
};

/// Target reach: chase a lookahead point on the global path toward the target
/// vertex or the best frontier.
class TargetReachPlanner {
 public:
  TargetReachPlanner(const EmbodimentSpec& spec, const DepthSensorModel& depth, const TargetReachParams& target,
                     const ExplorationParams& params);

  TrDecision plan(const Configuration& xi0, const MapView& maps, std::uint64_t seed);

  const GlobalGraphState& global() const { return global_; }
  int stall_count() const { return stalls_; }
  const TargetReachParams& params() const { return target_; }

 private:
  void integrate_scored(PlanGraph sparse, const MapView& maps);

  EmbodimentSpec spec_;
  RayFan fan_;
  TargetReachParams target_;
  ExplorationParams params_;
  GlobalGraphState global_;
  int stalls_ = 0;
  VertexId last_frontier_ = kNoVertex;
};

}  // namespace gplan
