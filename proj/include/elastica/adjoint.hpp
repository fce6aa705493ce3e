#pragma once

#include <vector>

#include "elastica/state.hpp"

namespace elastica {

/// Weights of the augmented compliance
///   J(K, v) = int -delta (1-t) sin(K + K0) + c_l Len(v) + c_p Per^eps(v).
struct DesignParams {
  double c_l = 1.0;            // cost per unit length of hard material
  double c_p = 1.0;            // perimeter (interface) weight
  double epsilon = 1.0 / 512;  // diffuse-interface width
};

struct ComplianceParts {
  double load = 0.0;       // int -delta (1-t) sin(K + K0)
  double length = 0.0;     // c_l Len(v)
  double perimeter = 0.0;  // c_p Per^eps(v)
  double total() const { return load + length + perimeter; }
};

ComplianceParts compliance(const FeFunction& k_phase, const FeFunction& v,
                           const DesignParams& params, const BeamProblem& problem);

struct AdjointSolution {
  FeFunction adjoint;        // P, with P(0) = 0
  std::vector<double> flux;  // per-cell p = A P'
};

/// Solves M[K] P = -delta (1-t) cos(K + K0) tested against hats, where M[K]
/// is exactly the state Hessian operator (Dirichlet row treated identically),
/// so p' = delta (1-t) (cos(K+K0) - P sin(K+K0)) with p(1) = 0.
AdjointSolution adjoint_solve(const StateSolution& state, const BeamProblem& problem);

/// Convenience overload that installs the phase-field material A(v) before
/// solving, so the adjoint matrix matches the state Hessian of that design.
AdjointSolution adjoint_solve(const StateSolution& state, const FeFunction& v,
                              BeamProblem problem);

/// Reduced design gradient tested against hats:
///   DJ(v)(xi_j) = c_l int 1/2 (v+1) xi_j
///               + c_p int eps v' xi_j' + 9/(8 eps) (v^2-1) v xi_j
///               - int 1/2 (b-a) (v+1) K' P' xi_j.
std::vector<double> reduced_gradient(const FeFunction& v, const FeFunction& k_phase,
                                     const FeFunction& adjoint, const DesignParams& params,
                                     const BeamProblem& problem);

struct FdCheckResult {
  double max_relative_error = 0.0;
  std::vector<double> per_direction;
};

/// Central finite differences of the reduced cost against the assembled
/// gradient, over seeded random directions; each perturbed cost re-solves the
/// state (warm-started from the base state, tight Newton tolerance).
FdCheckResult fd_gradient_check(const FeFunction& v, const DesignParams& params,
                                const BeamProblem& problem, double step, int num_directions = 10,
                                unsigned seed = 0);

/// Reduced cost J(K(v), v): solves the state for the design v (multilevel
/// from zero when no warm start is given) and evaluates the compliance.
struct DesignEvaluation {
  StateSolution state;
  ComplianceParts parts;
  double cost = 0.0;
};
DesignEvaluation evaluate_design(const FeFunction& v, const DesignParams& params,
                                 const BeamProblem& problem,
                                 const FeFunction* warm_phase = nullptr,
                                 const NewtonOptions& options = {}, int coarse_level = 3);

}  // namespace elastica
