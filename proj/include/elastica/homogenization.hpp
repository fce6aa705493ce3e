#pragma once

#include <vector>

#include "elastica/state.hpp"

namespace elastica {

/// Periodic two-phase layout realizing a volume-fraction profile: on each of
/// n equal periods the hard phase occupies the leading sub-interval whose
/// length is the period average of theta divided by n.
struct LaminateDesign {
  int periods = 1;
  std::vector<double> hard_fraction;  // period averages of theta

  /// Indicator of the hard phase at t (0 or 1).
  double chi_at(double t) const;
};

LaminateDesign laminate(const FeFunction& theta, int periods);

/// Pointwise stiffness a/b induced by the laminate layout.
Material laminate_material(const LaminateDesign& design, double a, double b);

/// Exact integral of g (polynomial-evaluable via antiderivative) against the
/// layout is left to callers; this helper integrates an arbitrary g over the
/// hard set by summing closed intervals, exact for the layout itself.
double integrate_against_laminate(const LaminateDesign& design,
                                  const std::function<double(double)>& g_antiderivative);

struct HomogenizationRow {
  int periods = 0;
  double error_harmonic = 0.0;    // ||K_n - K_theta||_inf
  double error_arithmetic = 0.0;  // ||K_n - K_arith||_inf (control)
  bool converged = false;
};

struct HomogenizationTable {
  std::vector<HomogenizationRow> rows;
  bool monotone_decreasing = false;  // strictly, in the harmonic errors
  FeFunction reference_phase;        // K for the harmonic-mean coefficient
  FeFunction arithmetic_phase;       // K for the arithmetic-mean control
};

/// Solves the state with A = A(chi_n) for each period count and with the
/// harmonic-mean coefficient A(theta); reports sup-norm phase errors. The
/// grid is problem-independent: fine_level should give >= 16 cells per period.
HomogenizationTable homogenization_experiment(const FeFunction& theta,
                                              const std::vector<int>& periods,
                                              const BeamProblem& problem, int coarse_level,
                                              int fine_level);

}  // namespace elastica
