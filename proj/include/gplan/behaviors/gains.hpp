#pragma once

#include "gplan/kernel/configuration.hpp"
#include "gplan/sensors/sensors.hpp"

#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gplan {

class BehaviorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GainParams {
  double mu_l = 0.01;  // 1/m
  double mu_d = 0.05;  // 1/rad
  double frontier_threshold = 20.0;  // Γ_thr_F, Unknown voxels
  int direction_window = 3;

  void validate() const;
};

struct MissionBudget {
  double endurance = 600.0;  // T_thr, s
  double v_nom = 1.0;        // m/s
  double t = 0.0;            // mission clock, s

  void validate() const;
};

/// Angle (rad) between root->leaf and the exploration direction; 0 without a
/// direction or for a zero displacement.
double direction_penalty_angle(const Vec3& root, const Vec3& leaf, const std::optional<Vec3>& direction);

/// e^{-μ_d λ_d} Σ_k Γ_k e^{-μ_l λ_l,k}, with λ_d taken from the path's first and last positions.
double local_exploration_objective(const std::vector<Configuration>& path, const std::vector<double>& gains,
                                   const std::vector<double>& lambda_l, const std::optional<Vec3>& direction,
                                   const GainParams& gp);

/// T = T_thr − λ_to/v_nom − λ_home/v_nom.
double remaining_time(const MissionBudget& budget, double lambda_to, double lambda_home);
/// T · Γ · e^{-μ_l λ_to}.
double global_gain(double gain, double lambda_to, double lambda_home, const MissionBudget& budget,
                   const GainParams& gp);

/// len/v_nom ≥ T_thr − t.
bool check_homing(const MissionBudget& budget, double home_length);

/// 1 + d_u/(d_u + d_l); 1 when d_u = 0.
double balancing_factor(double d_l, double d_u);
/// d_l + λ_bal · d_u.
double frontier_cost(double d_l, double d_u);

/// Normalized mean of the last `window` executed displacements.
class ExplorationDirection {
 public:
  explicit ExplorationDirection(int window = 3) : window_(window) {}

  void record(const Vec3& from, const Vec3& to);
  std::optional<Vec3> direction() const;

 private:
  int window_;
  std::deque<Vec3> moves_;
};

struct ViewGain {
  std::size_t gain = 0;
  double yaw = 0.0;
};

/// Γ_VE at ξ. Omnidirectional sensors keep ξ's yaw; otherwise the best of
/// eight yaws 2πk/8 (lowest k on ties).
ViewGain best_view_gain(const VoxelMap& map, const Configuration& xi, const RayFan& fan);

}  // namespace gplan
