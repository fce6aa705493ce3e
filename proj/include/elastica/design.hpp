#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "elastica/adjoint.hpp"

namespace elastica {

/// Optimality threshold lambda = (1/a - 1/b)^{-1} c_l; requires 0 < a < b.
double lambda_threshold(double a, double b, double c_l);

/// Modica-Mortola interface energy
///   Per^eps(v) = 1/2 int eps (v')^2 + (9/16)/eps (v^2 - 1)^2,
/// calibrated so one transition between -1 and +1 costs 1.
double perimeter(const FeFunction& v, double epsilon);

/// Length covered by hard material, Len(v) = int chi(v).
double length_hard(const FeFunction& v);

/// Zero crossings of the affine interpolant, sorted; crossings closer than
/// merge_distance are merged (keeping the first of each cluster).
std::vector<double> extract_interfaces(const FeFunction& v, double merge_distance);

struct OrderedCheck {
  bool ordered = false;
  double t_star = 0.0;  // the single crossing when ordered
};

/// True iff v has exactly one zero crossing t*, with v >= 0.9 before it and
/// v <= -0.9 after it outside a band of half-width 4 eps around t*.
OrderedCheck check_ordered(const FeFunction& v, double epsilon);

/// Per-cell classification against the optimality condition
///   k p <= lambda on soft cells, >= lambda on hard cells, = lambda in between,
/// with theta thresholds 0.05 / 0.95 and tolerance 0.05 lambda.
struct OptimalityReport {
  enum Phase { kSoft = 0, kIntermediate = 1, kHard = 2 };
  struct Cell {
    int cell = 0;
    double t_mid = 0.0;
    double theta = 0.0;
    double kp = 0.0;
    Phase phase = kSoft;
    double violation = 0.0;  // positive amount beyond the tolerance, else 0
  };
  std::vector<Cell> cells;
  double lambda = 0.0;
  double tolerance = 0.0;

  int violation_count() const;
  /// Worst violation among cells farther than band_halfwidth from every
  /// interface.
  double max_violation_outside(const std::vector<double>& interfaces,
                               double band_halfwidth) const;
};

/// theta per cell is chi(v at the midpoint) clamped to [0,1] (clamping only
/// in this report, never in the physics).
OptimalityReport check_optimality_condition(const FeFunction& v, const std::vector<double>& k,
                                            const std::vector<double>& p, double lambda);
OptimalityReport check_optimality_condition(const std::vector<double>& theta_cells,
                                            const std::vector<double>& t_mid,
                                            const std::vector<double>& k,
                                            const std::vector<double>& p, double lambda);

struct BfgsOptions {
  double grad_tolerance_rel = 1e-6;  // stop at ||DJ||_inf <= rel * (1 + |J|)
  int max_iterations = 1000;
  int max_halvings = 40;
  double armijo_c1 = 1e-4;
  NewtonOptions newton;         // used by every state re-solve
  int coarse_level = 3;         // multilevel fallback for cold starts
  std::string state_init = "zero";  // branch selection for the first state solve
};

struct DesignResult {
  FeFunction phase_field;  // final v
  StateSolution state;     // K at the final design
  AdjointSolution adjoint;
  std::vector<double> cost_history;           // initial cost plus every accepted iterate
  std::vector<double> gradient_norm_history;  // ||DJ||_inf at the same points
  std::vector<double> interfaces;
  bool ordered = false;
  double t_star = 0.0;
  OptimalityReport optimality;
  bool converged = false;
  bool line_search_failed = false;
  int iterations = 0;
};

/// BFGS with backtracking Armijo line search on v -> J(K(v), v); every cost
/// evaluation re-solves the state warm-started from the previous phase, every
/// gradient solves the adjoint system.
DesignResult bfgs_optimize(const FeFunction& v_init, const DesignParams& params,
                           const BeamProblem& problem, const BfgsOptions& options = {});

/// Named initializations: "undecided"/"zero" (v == 0), "all-soft", "all-hard",
/// "random" (nodal uniform in [-0.5, 0.5], seeded).
FeFunction named_phase_field_initialization(const UniformGrid& grid, std::string_view name,
                                            unsigned seed = 0);

}  // namespace elastica
