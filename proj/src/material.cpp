#include "elastica/material.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "elastica/errors.hpp"

namespace elastica {

double chi(double v) { return 0.25 * (v + 1.0) * (v + 1.0); }

double A_of_v(double v, double a, double b) {
  const double c = chi(v);
  return b * c + a * (1.0 - c);
}

double A_of_theta(double theta, double a, double b) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw ConfigError("volume fraction theta = " + std::to_string(theta) + " outside [0,1]");
  }
  return 1.0 / ((1.0 - theta) / a + theta / b);
}

double A_dot_of_theta(double theta, double a, double b) {
  const double at = A_of_theta(theta, a, b);
  return (1.0 / a - 1.0 / b) * at * at;
}

double v_of_theta(double theta) { return 2.0 * std::sqrt(theta) - 1.0; }

Material Material::homogeneous(double value) {
  return Material([value](double) { return value; });
}

Material Material::from_function(std::function<double(double)> f) {
  return Material(std::move(f));
}

Material Material::from_phase_field(FeFunction v, double a, double b) {
  return Material([v = std::move(v), a, b](double t) { return A_of_v(v.eval(t), a, b); });
}

Material Material::from_volume_fraction(FeFunction theta, double a, double b) {
  return Material(
      [theta = std::move(theta), a, b](double t) { return A_of_theta(theta.eval(t), a, b); });
}

Material Material::arithmetic_from_volume_fraction(FeFunction theta, double a, double b) {
  return Material([theta = std::move(theta), a, b](double t) {
    const double th = theta.eval(t);
    return (1.0 - th) * a + th * b;
  });
}

}  // namespace elastica
