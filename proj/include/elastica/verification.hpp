#pragma once

#include <optional>
#include <string>
#include <vector>

#include "elastica/state.hpp"

namespace elastica {

/// Executable encodings of the sign/monotonicity structure of converged
/// state/adjoint pairs. Checkers are pure: they never touch solver state,
/// and an empty violation list means the property holds discretely.

struct Violation {
  double location = 0.0;
  double magnitude = 0.0;
  std::string what;
};

struct SignReport {
  std::string quantity;
  std::vector<double> values;  // per-cell or nodal, as documented per checker
  std::optional<double> t0;
  std::optional<double> t1;
  std::optional<double> t2;
  std::vector<Violation> violations;

  bool clean() const { return violations.empty(); }
};

/// K' <= 0 per cell and nodal values in (-pi/2, 1e-12] on [0,1); requires
/// clamp angle 0 (the regime of the minimizer bound).
SignReport verify_monotone_range(const FeFunction& k_phase, double clamp_angle);

/// k < 0 on all but the last cell, strictly increasing per cell (ties within
/// 1e-12 flagged), |k| on the last cell below last_cell_tolerance.
SignReport verify_shear_structure(const std::vector<double>& shear, double spacing,
                                  double last_cell_tolerance);

/// rho = cot(K + K0) and Q = P - rho at nodes with |sin(K + K0)| >= 1e-8;
/// q = p + k / sin^2(K + K0) per cell (midpoint angles). Throws when every
/// node is excluded.
struct AuxiliaryFields {
  std::vector<int> retained_nodes;
  std::vector<double> rho;  // aligned with retained_nodes
  std::vector<double> q_upper;  // Q = P - rho, aligned with retained_nodes
  std::vector<int> excluded_nodes;
  std::vector<double> q_flux;  // per-cell q; NaN where the midpoint angle degenerates
};
AuxiliaryFields compute_auxiliary(const FeFunction& k_phase, const FeFunction& adjoint,
                                  const BeamProblem& problem);

/// Q > 0 up to its first nonpositive node t0 and Q <= 0 (tolerance 1e-8)
/// afterwards; t0 = 1 when Q never changes sign.
SignReport verify_Q_single_crossing(const AuxiliaryFields& aux, const UniformGrid& grid);

/// kp > 0 and strictly decreasing before its first nonpositive cell t2,
/// nonpositive afterwards (1e-10 slack).
SignReport verify_kp_structure(const std::vector<double>& shear,
                               const std::vector<double>& adjoint_flux, double spacing);

/// Repeated minimizer solves from seeded random initializations inside the
/// monotone range; reports the worst pairwise sup-norm disagreement.
struct UniquenessStudy {
  double max_pairwise_diff = 0.0;
  int runs = 0;
  bool all_converged = false;
};
UniquenessStudy uniqueness_study(const BeamProblem& problem, int level, int count,
                                 unsigned seed);

}  // namespace elastica
