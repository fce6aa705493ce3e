#pragma once

#include <functional>

#include "elastica/grid.hpp"

namespace elastica {

/// Smoothed indicator of the hard phase: chi(-1) = 0, chi(1) = 1.
double chi(double v);

/// Phase-field material law A(v) = b chi(v) + a (1 - chi(v)).
double A_of_v(double v, double a, double b);

/// Harmonic-mean effective coefficient of a volume fraction theta in [0,1]:
/// A(theta) = ((1-theta)/a + theta/b)^{-1}. Rejects theta outside [0,1].
double A_of_theta(double theta, double a, double b);

/// d/dtheta of A_of_theta: (1/a - 1/b) A(theta)^2.
double A_dot_of_theta(double theta, double a, double b);

/// Inverse of chi on [0, inf): the phase-field value whose indicator equals
/// theta (used to fill the fixed output schema for relaxed designs).
double v_of_theta(double theta);

/// Pointwise stiffness profile t -> A(t). Immutable and cheap to copy;
/// evaluated at quadrature points during assembly.
class Material {
public:
  Material() : f_([](double) { return 1.0; }) {}

  static Material homogeneous(double value);
  static Material from_function(std::function<double(double)> f);
  /// A(v(t)) with the phase-field law above.
  static Material from_phase_field(FeFunction v, double a, double b);
  /// Harmonic mean of a pointwise volume fraction.
  static Material from_volume_fraction(FeFunction theta, double a, double b);
  /// Arithmetic mean (1-theta) a + theta b; the deliberately wrong effective
  /// coefficient used as a control in the homogenization experiment.
  static Material arithmetic_from_volume_fraction(FeFunction theta, double a, double b);

  double operator()(double t) const { return f_(t); }

private:
  explicit Material(std::function<double(double)> f) : f_(std::move(f)) {}
  std::function<double(double)> f_;
};

}  // namespace elastica
