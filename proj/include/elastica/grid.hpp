#pragma once

#include <functional>
#include <vector>

namespace elastica {

/// Uniform dyadic grid on [0,1] with N = 2^level + 1 nodes x_n = n*h,
/// h = 1/(N-1).
class UniformGrid {
public:
  UniformGrid() : UniformGrid(1) {}
  explicit UniformGrid(int level);

  int level() const { return level_; }
  int num_nodes() const { return num_nodes_; }
  int num_cells() const { return num_nodes_ - 1; }
  double spacing() const { return spacing_; }
  double node(int n) const { return n * spacing_; }
  double cell_midpoint(int cell) const { return (cell + 0.5) * spacing_; }

  /// Index of the cell containing t; t must lie in [0,1] (t = 1 maps to the
  /// last cell).
  int cell_of(double t) const;

  bool operator==(const UniformGrid& other) const { return level_ == other.level_; }
  bool operator!=(const UniformGrid& other) const { return !(*this == other); }

private:
  int level_;
  int num_nodes_;
  double spacing_;
};

/// Continuous piecewise-affine function in the nodal hat basis: coeffs[n] is
/// the value at node x_n, the derivative is constant on each cell.
class FeFunction {
public:
  /// Zero function on the smallest grid; placeholder for result structs.
  FeFunction() : FeFunction(UniformGrid(), std::vector<double>(3, 0.0)) {}
  FeFunction(UniformGrid grid, std::vector<double> coeffs);

  static FeFunction zero(const UniformGrid& grid);
  static FeFunction constant(const UniformGrid& grid, double value);
  static FeFunction sample(const UniformGrid& grid, const std::function<double(double)>& f);

  const UniformGrid& grid() const { return grid_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::vector<double>& coeffs() { return coeffs_; }
  double operator[](int n) const { return coeffs_[n]; }
  double& operator[](int n) { return coeffs_[n]; }

  /// Linear interpolation between adjacent nodal values; rejects t outside
  /// [0,1]. Evaluation at a node returns the coefficient exactly.
  double eval(double t) const;

  /// (coeffs[cell+1] - coeffs[cell]) / h.
  double deriv_on_cell(int cell) const;

  /// Same function on the next finer grid: even coefficients copy nodal
  /// values, odd ones are midpoint averages.
  FeFunction prolongate() const;

  double max_abs() const;
  double max_abs_diff(const FeFunction& other) const;

private:
  UniformGrid grid_;
  std::vector<double> coeffs_;
};

/// Gauss-Legendre rule with Q points per cell, stored in reference
/// coordinates on (0,1); weights sum to 1 and the rule is exact for
/// polynomials of degree <= 2Q-1.
class QuadratureRule {
public:
  explicit QuadratureRule(int points_per_cell = 5);

  int points_per_cell() const { return static_cast<int>(points_.size()); }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

/// Default rule used throughout the solvers (Q = 5).
const QuadratureRule& default_rule();

/// Composite Gauss quadrature of g over (0,1): sum over all cells and points
/// of w_q^l g(x_q^l). Non-finite integrand values raise an Error.
double integrate(const std::function<double(double)>& g, const UniformGrid& grid,
                 const QuadratureRule& rule = default_rule());

}  // namespace elastica
