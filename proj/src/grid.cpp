#include "elastica/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "elastica/errors.hpp"

namespace elastica {

namespace {
constexpr int kMaxLevel = 26;  // 2^26 + 1 nodes; beyond that indices get unsafe
}

UniformGrid::UniformGrid(int level) : level_(level) {
  if (level < 1 || level > kMaxLevel) {
    throw ConfigError("grid level " + std::to_string(level) + " outside [1, " +
                      std::to_string(kMaxLevel) + "]");
  }
  num_nodes_ = (1 << level) + 1;
  spacing_ = 1.0 / (num_nodes_ - 1);
}

int UniformGrid::cell_of(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ConfigError("argument t = " + std::to_string(t) + " outside [0,1]");
  }
  int cell = static_cast<int>(t * num_cells());
  return std::min(cell, num_cells() - 1);
}

FeFunction::FeFunction(UniformGrid grid, std::vector<double> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != grid_.num_nodes()) {
    throw ConfigError("coefficient vector length " + std::to_string(coeffs_.size()) +
                      " does not match grid with " + std::to_string(grid_.num_nodes()) +
                      " nodes");
  }
}

FeFunction FeFunction::zero(const UniformGrid& grid) {
  return FeFunction(grid, std::vector<double>(grid.num_nodes(), 0.0));
}

FeFunction FeFunction::constant(const UniformGrid& grid, double value) {
  return FeFunction(grid, std::vector<double>(grid.num_nodes(), value));
}

FeFunction FeFunction::sample(const UniformGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> coeffs(grid.num_nodes());
  for (int n = 0; n < grid.num_nodes(); ++n) coeffs[n] = f(grid.node(n));
  return FeFunction(grid, std::move(coeffs));
}

double FeFunction::eval(double t) const {
  const int cell = grid_.cell_of(t);
  double r = (t - grid_.node(cell)) / grid_.spacing();
  r = std::clamp(r, 0.0, 1.0);
  return (1.0 - r) * coeffs_[cell] + r * coeffs_[cell + 1];
}

double FeFunction::deriv_on_cell(int cell) const {
  return (coeffs_[cell + 1] - coeffs_[cell]) / grid_.spacing();
}

FeFunction FeFunction::prolongate() const {
  UniformGrid fine(grid_.level() + 1);
  std::vector<double> out(fine.num_nodes());
  for (int n = 0; n < grid_.num_nodes(); ++n) out[2 * n] = coeffs_[n];
  for (int n = 0; n + 1 < grid_.num_nodes(); ++n)
    out[2 * n + 1] = 0.5 * (coeffs_[n] + coeffs_[n + 1]);
  return FeFunction(fine, std::move(out));
}

double FeFunction::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double FeFunction::max_abs_diff(const FeFunction& other) const {
  if (grid_ != other.grid_) throw ConfigError("max_abs_diff requires matching grids");
  double m = 0.0;
  for (size_t n = 0; n < coeffs_.size(); ++n)
    m = std::max(m, std::abs(coeffs_[n] - other.coeffs_[n]));
  return m;
}

QuadratureRule::QuadratureRule(int points_per_cell) {
  // Gauss-Legendre nodes/weights mapped to (0,1); weights sum to 1.
  switch (points_per_cell) {
    case 1:
      points_ = {0.5};
      weights_ = {1.0};
      break;
    case 2:
      points_ = {0.21132486540518711775, 0.78867513459481288225};
      weights_ = {0.5, 0.5};
      break;
    case 3:
      points_ = {0.11270166537925831148, 0.5, 0.88729833462074168852};
      weights_ = {0.27777777777777777778, 0.44444444444444444444, 0.27777777777777777778};
      break;
    case 4:
      points_ = {0.06943184420297371239, 0.33000947820757186760, 0.66999052179242813240,
                 0.93056815579702628761};
      weights_ = {0.17392742256872692869, 0.32607257743127307131, 0.32607257743127307131,
                  0.17392742256872692869};
      break;
    case 5:
      points_ = {0.04691007703066800360, 0.23076534494715845448, 0.5,
                 0.76923465505284154552, 0.95308992296933199640};
      weights_ = {0.11846344252809454376, 0.23931433524968323402, 0.28444444444444444444,
                  0.23931433524968323402, 0.11846344252809454376};
      break;
    default:
      throw ConfigError("quadrature rule supports 1..5 points per cell, got " +
                        std::to_string(points_per_cell));
  }
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule(5);
  return rule;
}

double integrate(const std::function<double(double)>& g, const UniformGrid& grid,
                 const QuadratureRule& rule) {
  const double h = grid.spacing();
  double sum = 0.0;
  for (int cell = 0; cell < grid.num_cells(); ++cell) {
    const double left = grid.node(cell);
    for (int q = 0; q < rule.points_per_cell(); ++q) {
      const double t = left + h * rule.points()[q];
      const double value = g(t);
      if (!std::isfinite(value)) {
        throw Error("integrand is not finite at t = " + std::to_string(t));
      }
      sum += h * rule.weights()[q] * value;
    }
  }
  return sum;
}

}  // namespace elastica
