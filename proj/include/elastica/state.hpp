#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "elastica/grid.hpp"
#include "elastica/linalg.hpp"
#include "elastica/problem.hpp"

namespace elastica {

/// The discrete stored energy of the clamped beam is
///   E(K) = int  1/2 A (K')^2 + delta (1-t) sin(K + K0)  dt
/// plus any point-constraint penalties; K is the phase relative to the clamp
/// angle, with the Dirichlet condition K(0) = 0. Newton's method solves
/// DE(K) = 0, optionally continued over a dyadic grid hierarchy.

struct NewtonOptions {
  double tolerance = 1e-10;  // on ||R||_inf
  int max_iterations = 50;
  bool damped = true;  // backtracking safeguard; full steps when it already decreases
};

struct StateSolution {
  FeFunction phase;           // K, coeffs[0] == 0
  std::vector<double> shear;  // per-cell k = A K'
  double energy = 0.0;
  int newton_iterations = 0;
  double final_residual_norm = 0.0;
  bool converged = false;
  std::vector<double> energy_history;  // energy at the initial guess and each accepted iterate
};

struct MultilevelResult {
  StateSolution solution;
  std::vector<int> iterations_per_level;
  int first_unconverged_level = -1;  // -1 when every level converged
};

/// Planar curve gamma(t) = int_0^t exp(i (K + K0)); nodal positions.
struct Curve {
  std::vector<double> x;
  std::vector<double> y;
};

double state_energy(const FeFunction& k_phase, const BeamProblem& problem,
                    const QuadratureRule& rule = default_rule());

/// First-derivative tests against all hat functions; entry 0 is cleared for
/// the clamped node.
std::vector<double> state_residual(const FeFunction& k_phase, const BeamProblem& problem,
                                   const QuadratureRule& rule = default_rule());

/// Banded part of the second-derivative matrix, with row/column 0 replaced by
/// the identity row. Exact Hessian when no point constraints are present;
/// with constraints the rank-one couplings are handled inside the solvers.
TridiagonalMatrix state_hessian(const FeFunction& k_phase, const BeamProblem& problem,
                                const QuadratureRule& rule = default_rule());

/// Full second-derivative operator including constraint couplings, Dirichlet
/// treated as above. The adjoint solve reuses exactly this operator.
BandedPlusLowRank state_hessian_operator(const FeFunction& k_phase, const BeamProblem& problem,
                                         const QuadratureRule& rule = default_rule());

StateSolution newton_solve(const FeFunction& initial_phase, const BeamProblem& problem,
                           const NewtonOptions& options = {});

/// Solve on the coarse level, prolongate, re-solve, up to the fine level.
/// A null initial phase starts from K == 0 on the coarse grid.
MultilevelResult multilevel_solve(const BeamProblem& problem, int coarse_level, int fine_level,
                                  const FeFunction* initial_coarse_phase = nullptr,
                                  const NewtonOptions& options = {});

Curve reconstruct_curve(const FeFunction& k_phase, double clamp_angle,
                        const QuadratureRule& rule = default_rule());

/// gamma(t) for arbitrary t in [0,1] by the same cumulative quadrature.
std::array<double, 2> curve_point(const FeFunction& k_phase, double clamp_angle, double t,
                                  const QuadratureRule& rule = default_rule());

/// Per-cell k = A(midpoint) * K'.
std::vector<double> shear_field(const FeFunction& k_phase, const BeamProblem& problem);

/// Named coarse initializations: "zero" (simple branch), "twisted" (-2 pi t),
/// "s-shape" (-pi sin(2 pi t)/2).
FeFunction named_state_initialization(const UniformGrid& grid, std::string_view name);

}  // namespace elastica
