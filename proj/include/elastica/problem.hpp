#pragma once

#include <vector>

#include "elastica/material.hpp"

namespace elastica {

/// Quadratic penalty prescribing the beam position at one time: adds
/// weight * |gamma(time) - (target_x, target_y)|^2 to the stored energy.
struct PointConstraint {
  double time = 1.0;  // in (0, 1]
  double target_x = 0.0;
  double target_y = 0.0;
  double weight = 1e4;
};

/// Clamped beam under the vertical force f = -delta e2 with clamp angle
/// clamp_angle; the stiffness profile A(t) takes values in [a, b]
/// (a == b for a homogeneous material).
struct BeamProblem {
  double delta = 100.0;
  double clamp_angle = 0.0;
  double a = 0.5;
  double b = 1.0;
  Material material = Material::homogeneous(1.0);
  std::vector<PointConstraint> constraints;

  void validate() const;
};

}  // namespace elastica
