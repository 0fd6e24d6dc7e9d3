#pragma once

#include "gplan/geometry.hpp"

#include <optional>

namespace gplan {

/// Robot pose used by the planner: position, yaw and, for robots with an
/// actuated camera, the camera pitch (positive looks up).
struct Configuration {
  Vec3 p = Vec3::Zero();
  double yaw = 0.0;
  std::optional<double> pitch;

  Configuration() = default;
  Configuration(const Vec3& position, double yaw_rad = 0.0, std::optional<double> pitch_rad = std::nullopt)
      : p(position), yaw(wrap_angle(yaw_rad)), pitch(pitch_rad) {}

  bool operator==(const Configuration&) const = default;
};

}  // namespace gplan
