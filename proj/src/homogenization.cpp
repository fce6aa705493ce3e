#include "elastica/homogenization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "elastica/errors.hpp"

namespace elastica {

namespace {

// Exact integral of a piecewise-affine function over [lo, hi].
double integrate_affine(const FeFunction& f, double lo, double hi) {
  const UniformGrid& grid = f.grid();
  double sum = 0.0;
  int cell = grid.cell_of(lo);
  double left = lo;
  while (left < hi - 1e-15) {
    const double cell_right = grid.node(cell + 1);
    const double right = std::min(hi, cell_right);
    sum += 0.5 * (f.eval(left) + f.eval(right)) * (right - left);
    left = right;
    if (cell + 1 < grid.num_cells()) ++cell;
  }
  return sum;
}

}  // namespace

double LaminateDesign::chi_at(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("laminate indicator argument outside [0,1]");
  int period = std::min(static_cast<int>(t * periods), periods - 1);
  const double local = t - static_cast<double>(period) / periods;
  return local < hard_fraction[period] / periods ? 1.0 : 0.0;
}

LaminateDesign laminate(const FeFunction& theta, int periods) {
  if (periods < 1) throw ConfigError("laminate requires at least one period");
  LaminateDesign design;
  design.periods = periods;
  design.hard_fraction.resize(periods);
  for (int j = 0; j < periods; ++j) {
    const double lo = static_cast<double>(j) / periods;
    const double hi = static_cast<double>(j + 1) / periods;
    design.hard_fraction[j] = periods * integrate_affine(theta, lo, hi);
  }
  return design;
}

Material laminate_material(const LaminateDesign& design, double a, double b) {
  return Material::from_function(
      [design, a, b](double t) { return design.chi_at(t) > 0.5 ? b : a; });
}

double integrate_against_laminate(const LaminateDesign& design,
                                  const std::function<double(double)>& g_antiderivative) {
  double sum = 0.0;
  for (int j = 0; j < design.periods; ++j) {
    const double lo = static_cast<double>(j) / design.periods;
    const double hi = lo + design.hard_fraction[j] / design.periods;
    sum += g_antiderivative(hi) - g_antiderivative(lo);
  }
  return sum;
}

HomogenizationTable homogenization_experiment(const FeFunction& theta,
                                              const std::vector<int>& periods,
                                              const BeamProblem& problem, int coarse_level,
                                              int fine_level) {
  for (int n = 0; n < theta.grid().num_nodes(); ++n) {
    if (!(theta[n] >= 0.0 && theta[n] <= 1.0))
      throw ConfigError("volume fraction must take nodal values in [0,1]");
  }

  BeamProblem harmonic = problem;
  harmonic.material = Material::from_volume_fraction(theta, problem.a, problem.b);
  BeamProblem arithmetic = problem;
  arithmetic.material = Material::arithmetic_from_volume_fraction(theta, problem.a, problem.b);

  MultilevelResult ref = multilevel_solve(harmonic, coarse_level, fine_level);
  if (!ref.solution.converged)
    throw SolveError("homogenized reference state did not converge");
  MultilevelResult control = multilevel_solve(arithmetic, coarse_level, fine_level);
  if (!control.solution.converged)
    throw SolveError("arithmetic-mean control state did not converge");

  HomogenizationTable table{{}, false, ref.solution.phase, control.solution.phase};

  for (int n : periods) {
    const LaminateDesign design = laminate(theta, n);
    BeamProblem pb = problem;
    pb.material = laminate_material(design, problem.a, problem.b);
    // The homogenized phase is the natural warm start: the laminate solution
    // converges to it as the period count grows.
    StateSolution sol = newton_solve(ref.solution.phase, pb);
    if (!sol.converged) {
      MultilevelResult ml = multilevel_solve(pb, coarse_level, fine_level);
      sol = std::move(ml.solution);
    }
    HomogenizationRow row;
    row.periods = n;
    row.converged = sol.converged;
    row.error_harmonic = sol.phase.max_abs_diff(ref.solution.phase);
    row.error_arithmetic = sol.phase.max_abs_diff(control.solution.phase);
    table.rows.push_back(row);
  }

  table.monotone_decreasing = table.rows.size() >= 2;
  for (size_t i = 0; i + 1 < table.rows.size(); ++i) {
    if (!(table.rows[i + 1].error_harmonic < table.rows[i].error_harmonic))
      table.monotone_decreasing = false;
  }
  return table;
}

}  // namespace elastica
