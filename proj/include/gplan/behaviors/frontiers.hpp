#pragma once

#include "gplan/behaviors/gains.hpp"
#include "gplan/kernel/plan_graph.hpp"

#include <cstdint>
#include <map>

namespace gplan {

struct FrontierRecord {
  VertexId vertex = kNoVertex;
  std::size_t gain = 0;         // cached Γ_VE
  std::uint64_t revision = 0;   // map revision of the cached value
  double yaw = 0.0;             // yaw that achieved the gain
};

/// Global-graph vertices whose Γ_VE exceeded the threshold when last evaluated.
class FrontierSet {
 public:
  explicit FrontierSet(double threshold = 20.0) : threshold_(threshold) {}

  double threshold() const { return threshold_; }
  /// Inserts, refreshes or drops the record for v.
  void consider(VertexId v, const ViewGain& g, std::uint64_t revision);
  void erase(VertexId v) { records_.erase(v); }
  /// Re-evaluates every record older than the map's revision; returns how many were re-cast.
  std::size_t refresh(const PlanGraph& global, const VoxelMap& map, const RayFan& fan);

  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }
  bool contains(VertexId v) const { return records_.count(v) != 0; }
  const std::map<VertexId, FrontierRecord>& records() const { return records_; }

 private:
  double threshold_;
  std::map<VertexId, FrontierRecord> records_;
};

/// Lazy refresh followed by a snapshot of the surviving records (ascending vertex id).
std::vector<FrontierRecord> update_frontiers(FrontierSet& frontiers, const PlanGraph& global, const VoxelMap& map,
                                             const RayFan& fan);

/// Shortest path on the global graph; throws BehaviorError("home unreachable")
/// when the vertices are disconnected.
std::vector<VertexId> plan_return_home(const PlanGraph& global, VertexId from, VertexId home);

/// Configurations along a vertex sequence.
std::vector<Configuration> configurations_of(const PlanGraph& g, const std::vector<VertexId>& ids);

}  // namespace gplan
