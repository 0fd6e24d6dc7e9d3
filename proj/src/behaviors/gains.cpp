#include "gplan/behaviors/gains.hpp"

#include <algorithm>
#include <cmath>

namespace gplan {

void GainParams::validate() const {
  if (mu_l < 0.0 || mu_d < 0.0) throw BehaviorError("gain penalties must be non-negative");
  if (frontier_threshold < 0.0) throw BehaviorError("frontier threshold must be non-negative");
  if (direction_window < 1) throw BehaviorError("direction window must be at least 1");
}

void MissionBudget::validate() const {
  if (!(endurance > 0.0)) throw BehaviorError("endurance must be positive");
  if (!(v_nom > 0.0)) throw BehaviorError("nominal speed must be positive");
}

double direction_penalty_angle(const Vec3& root, const Vec3& leaf, const std::optional<Vec3>& direction) {
  const Vec3 d = leaf - root;
  if (!direction || d.squaredNorm() < 1e-18 || direction->squaredNorm() < 1e-18) return 0.0;
  const double c = d.normalized().dot(direction->normalized());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double local_exploration_objective(const std::vector<Configuration>& path, const std::vector<double>& gains,
                                   const std::vector<double>& lambda_l, const std::optional<Vec3>& direction,
                                   const GainParams& gp) {
  if (gains.size() != path.size() || lambda_l.size() != path.size())
    throw BehaviorError("gain and distance lists must match the path");
  if (path.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) sum += gains[k] * std::exp(-gp.mu_l * lambda_l[k]);
  return std::exp(-gp.mu_d * direction_penalty_angle(path.front().p, path.back().p, direction)) * sum;
}

double remaining_time(const MissionBudget& budget, double lambda_to, double lambda_home) {
  return budget.endurance - lambda_to / budget.v_nom - lambda_home / budget.v_nom;
}

double global_gain(double gain, double lambda_to, double lambda_home, const MissionBudget& budget,
                   const GainParams& gp) {
  return remaining_time(budget, lambda_to, lambda_home) * gain * std::exp(-gp.mu_l * lambda_to);
}

bool check_homing(const MissionBudget& budget, double home_length) {
  return home_length / budget.v_nom >= budget.endurance - budget.t;
}

double balancing_factor(double d_l, double d_u) {
  if (d_u <= 0.0) return 1.0;
  return 1.0 + d_u / (d_u + d_l);
}

double frontier_cost(double d_l, double d_u) { return d_l + balancing_factor(d_l, d_u) * d_u; }

void ExplorationDirection::record(const Vec3& from, const Vec3& to) {
  if ((to - from).squaredNorm() < 1e-18) return;
  moves_.push_back(to - from);
  while (static_cast<int>(moves_.size()) > window_) moves_.pop_front();
}

std::optional<Vec3> ExplorationDirection::direction() const {
  if (moves_.empty()) return std::nullopt;
  Vec3 sum = Vec3::Zero();
  for (const auto& m : moves_) sum += m;
  if (sum.squaredNorm() < 1e-18) return std::nullopt;
  return sum.normalized();
}

ViewGain best_view_gain(const VoxelMap& map, const Configuration& xi, const RayFan& fan) {
  if (fan.model().omnidirectional()) return {gamma_ve(map, xi, fan), xi.yaw};
  ViewGain best{0, wrap_angle(0.0)};
  bool first = true;
  for (int k = 0; k < 8; ++k) {
    const double yaw = wrap_angle(2.0 * std::numbers::pi * k / 8.0);
    const std::size_t g = gamma_ve(map, Configuration(xi.p, yaw, xi.pitch), fan);
    if (first || g > best.gain) best = {g, yaw};
    first = false;
  }
  return best;
}

}  // namespace gplan
