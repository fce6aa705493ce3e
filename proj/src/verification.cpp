#include "elastica/verification.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "elastica/errors.hpp"

namespace elastica {

namespace {
constexpr double kHalfPi = 1.57079632679489661923;
}

SignReport verify_monotone_range(const FeFunction& k_phase, double clamp_angle) {
  if (clamp_angle != 0.0)
    throw ConfigError("monotone-range check applies to clamp angle 0 only");
  const UniformGrid& grid = k_phase.grid();
  SignReport report;
  report.quantity = "K";
  report.values = k_phase.coeffs();
  for (int cell = 0; cell < grid.num_cells(); ++cell) {
    const double d = k_phase.deriv_on_cell(cell);
    if (d > 1e-8) {
      report.violations.push_back(
          {grid.cell_midpoint(cell), d, "cell derivative exceeds 0 (K must be nonincreasing)"});
    }
  }
  // Range bound on [0, 1): the free-end node is exempt.
  for (int n = 0; n + 1 < grid.num_nodes(); ++n) {
    if (k_phase[n] > 1e-12) {
      report.violations.push_back({grid.node(n), k_phase[n], "nodal value above 0"});
    } else if (k_phase[n] <= -kHalfPi) {
      report.violations.push_back({grid.node(n), -kHalfPi - k_phase[n],
                                   "nodal value at or below -pi/2"});
    }
  }
  return report;
}

SignReport verify_shear_structure(const std::vector<double>& shear, double spacing,
                                  double last_cell_tolerance) {
  SignReport report;
  report.quantity = "k";
  report.values = shear;
  const int cells = static_cast<int>(shear.size());
  for (int i = 0; i + 1 < cells; ++i) {
    const double t = (i + 0.5) * spacing;
    if (!(shear[i] < 0.0))
      report.violations.push_back({t, shear[i], "shear not negative before the last cell"});
    if (!(shear[i + 1] > shear[i] + 1e-12)) {
      report.violations.push_back(
          {t, shear[i + 1] - shear[i], "shear not strictly increasing (level set of positive length)"});
    }
  }
  if (cells > 0 && !(std::abs(shear[cells - 1]) <= last_cell_tolerance)) {
    report.violations.push_back({1.0 - 0.5 * spacing, std::abs(shear[cells - 1]),
                                 "free-end shear above the natural-boundary tolerance"});
  }
  return report;
}

AuxiliaryFields compute_auxiliary(const FeFunction& k_phase, const FeFunction& adjoint,
                                  const BeamProblem& problem) {
  if (k_phase.grid() != adjoint.grid())
    throw ConfigError("state and adjoint must live on the same grid");
  const UniformGrid& grid = k_phase.grid();
  AuxiliaryFields aux;
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const double angle = k_phase[n] + problem.clamp_angle;
    const double s = std::sin(angle);
    if (std::abs(s) < 1e-8) {
      aux.excluded_nodes.push_back(n);
      continue;
    }
    aux.retained_nodes.push_back(n);
    const double rho = std::cos(angle) / s;
    aux.rho.push_back(rho);
    aux.q_upper.push_back(adjoint[n] - rho);
  }
  if (aux.retained_nodes.empty())
    throw SolveError("auxiliary fields degenerate: sin(K + K0) vanishes at every node");

  const std::vector<double> k = shear_field(k_phase, problem);
  const std::vector<double> p = shear_field(adjoint, problem);
  aux.q_flux.assign(grid.num_cells(), std::numeric_limits<double>::quiet_NaN());
  for (int cell = 0; cell < grid.num_cells(); ++cell) {
    const double angle = 0.5 * (k_phase[cell] + k_phase[cell + 1]) + problem.clamp_angle;
    const double s = std::sin(angle);
    if (std::abs(s) < 1e-8) continue;
    aux.q_flux[cell] = p[cell] + k[cell] / (s * s);
  }
  return aux;
}

SignReport verify_Q_single_crossing(const AuxiliaryFields& aux, const UniformGrid& grid) {
  SignReport report;
  report.quantity = "Q";
  report.values = aux.q_upper;
  int crossing = -1;
  for (size_t i = 0; i < aux.q_upper.size(); ++i) {
    if (crossing < 0) {
      if (aux.q_upper[i] <= 0.0) crossing = static_cast<int>(i);
    } else if (aux.q_upper[i] > 1e-8) {
      report.violations.push_back({grid.node(aux.retained_nodes[i]), aux.q_upper[i],
                                   "Q returns to positive after its first sign change"});
    }
  }
  report.t0 = crossing < 0 ? 1.0 : grid.node(aux.retained_nodes[crossing]);
  return report;
}

SignReport verify_kp_structure(const std::vector<double>& shear,
                               const std::vector<double>& adjoint_flux, double spacing) {
  if (shear.size() != adjoint_flux.size())
    throw ConfigError("shear and adjoint flux must have matching cell counts");
  SignReport report;
  report.quantity = "kp";
  const int cells = static_cast<int>(shear.size());
  report.values.resize(cells);
  for (int i = 0; i < cells; ++i) report.values[i] = shear[i] * adjoint_flux[i];

  int first_nonpositive = cells;
  for (int i = 0; i < cells; ++i) {
    if (report.values[i] <= 0.0) {
      first_nonpositive = i;
      break;
    }
  }
  for (int i = 0; i + 1 < first_nonpositive; ++i) {
    if (!(report.values[i + 1] < report.values[i] - 1e-10)) {
      report.violations.push_back({(i + 0.5) * spacing,
                                   report.values[i + 1] - report.values[i],
                                   "kp not strictly decreasing while positive"});
    }
  }
  for (int i = first_nonpositive; i < cells; ++i) {
    if (report.values[i] > 1e-10) {
      report.violations.push_back(
          {(i + 0.5) * spacing, report.values[i], "kp positive beyond its first sign change"});
    }
  }
  report.t2 = first_nonpositive == cells ? 1.0 : first_nonpositive * spacing;
  return report;
}

UniquenessStudy uniqueness_study(const BeamProblem& problem, int level, int count,
                                 unsigned seed) {
  const UniformGrid grid(level);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-kHalfPi + 0.05, -0.01);

  NewtonOptions tight;
  tight.tolerance = 1e-12;
  tight.max_iterations = 200;

  UniquenessStudy study;
  study.runs = count;
  study.all_converged = true;
  std::vector<FeFunction> phases;
  for (int run = 0; run < count; ++run) {
    FeFunction init = FeFunction::zero(grid);
    for (int n = 1; n < grid.num_nodes(); ++n) init[n] = dist(rng);
    // Two smoothing passes keep the draw inside the monotone range while
    // removing node-scale noise that stalls the first Newton steps.
    for (int pass = 0; pass < 2; ++pass) {
      FeFunction smooth = init;
      for (int n = 1; n + 1 < grid.num_nodes(); ++n)
        smooth[n] = 0.25 * init[n - 1] + 0.5 * init[n] + 0.25 * init[n + 1];
      init = smooth;
      init[0] = 0.0;
    }
    StateSolution sol = newton_solve(init, problem, tight);
    if (!sol.converged) study.all_converged = false;
    phases.push_back(sol.phase);
  }
  for (size_t i = 0; i < phases.size(); ++i)
    for (size_t j = i + 1; j < phases.size(); ++j)
      study.max_pairwise_diff = std::max(study.max_pairwise_diff,
                                         phases[i].max_abs_diff(phases[j]));
  return study;
}

}  // namespace elastica
