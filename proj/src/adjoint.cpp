#include "elastica/adjoint.hpp"

#include <cmath>
#include <random>
#include <string>

#include "elastica/errors.hpp"

namespace elastica {

namespace {

void require_same_grid(const FeFunction& a, const FeFunction& b) {
  if (a.grid() != b.grid()) throw ConfigError("fields must live on the same grid");
}

}  // namespace

ComplianceParts compliance(const FeFunction& k_phase, const FeFunction& v,
                           const DesignParams& params, const BeamProblem& problem) {
  require_same_grid(k_phase, v);
  if (!(params.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  const UniformGrid& grid = k_phase.grid();
  const QuadratureRule& rule = default_rule();
  const double h = grid.spacing();
  const double eps = params.epsilon;

  ComplianceParts parts;
  for (int cell = 0; cell < grid.num_cells(); ++cell) {
    const double left = grid.node(cell);
    const double dv = v.deriv_on_cell(cell);
    for (int q = 0; q < rule.points_per_cell(); ++q) {
      const double r = rule.points()[q];
      const double t = left + h * r;
      const double w = h * rule.weights()[q];
      const double angle = (1.0 - r) * k_phase[cell] + r * k_phase[cell + 1] + problem.clamp_angle;
      const double vv = (1.0 - r) * v[cell] + r * v[cell + 1];
      parts.load += w * (-problem.delta * (1.0 - t) * std::sin(angle));
      parts.length += w * params.c_l * chi(vv);
      const double well = (vv * vv - 1.0);
      parts.perimeter += w * params.c_p * 0.5 * (eps * dv * dv + (9.0 / 16.0) / eps * well * well);
    }
  }
  return parts;
}

AdjointSolution adjoint_solve(const StateSolution& state, const BeamProblem& problem) {
  const FeFunction& K = state.phase;
  const UniformGrid& grid = K.grid();
  const QuadratureRule& rule = default_rule();
  const double h = grid.spacing();
  const int n = grid.num_nodes();

  // Right-hand side -delta (1-t) cos(K + K0) tested against hats; entry 0 is
  // the Dirichlet row P(0) = 0.
  std::vector<double> rhs(n, 0.0);
  for (int cell = 0; cell < grid.num_cells(); ++cell) {
    const double left = grid.node(cell);
    for (int q = 0; q < rule.points_per_cell(); ++q) {
      const double r = rule.points()[q];
      const double t = left + h * r;
      const double w = h * rule.weights()[q];
      const double angle = (1.0 - r) * K[cell] + r * K[cell + 1] + problem.clamp_angle;
      const double value = -problem.delta * (1.0 - t) * std::cos(angle);
      rhs[cell] += w * value * (1.0 - r);
      rhs[cell + 1] += w * value * r;
    }
  }
  rhs[0] = 0.0;

  const BandedPlusLowRank op = state_hessian_operator(K, problem, rule);
  std::vector<double> p_coeffs;
  try {
    p_coeffs = op.solve(rhs);
  } catch (const SingularMatrixError& e) {
    throw SolveError(std::string("adjoint solve: singular system: ") + e.what());
  }

  AdjointSolution out{FeFunction(grid, std::move(p_coeffs)), {}};
  out.flux = shear_field(out.adjoint, problem);
  return out;
}

AdjointSolution adjoint_solve(const StateSolution& state, const FeFunction& v,
                              BeamProblem problem) {
  require_same_grid(state.phase, v);
  problem.material = Material::from_phase_field(v, problem.a, problem.b);
  return adjoint_solve(state, problem);
}

std::vector<double> reduced_gradient(const FeFunction& v, const FeFunction& k_phase,
                                     const FeFunction& adjoint, const DesignParams& params,
                                     const BeamProblem& problem) {
  require_same_grid(v, k_phase);
  require_same_grid(v, adjoint);
  const UniformGrid& grid = v.grid();
  const QuadratureRule& rule = default_rule();
  const double h = grid.spacing();
  const double eps = params.epsilon;
  const double width = problem.b - problem.a;

  std::vector<double> g(grid.num_nodes(), 0.0);
  for (int cell = 0; cell < grid.num_cells(); ++cell) {
    const double dv = v.deriv_on_cell(cell);
    const double dk = k_phase.deriv_on_cell(cell);
    const double dp = adjoint.deriv_on_cell(cell);
    for (int q = 0; q < rule.points_per_cell(); ++q) {
      const double r = rule.points()[q];
      const double w = h * rule.weights()[q];
      const double vv = (1.0 - r) * v[cell] + r * v[cell + 1];
      const double pointwise = params.c_l * 0.5 * (vv + 1.0) +
                               params.c_p * (9.0 / (8.0 * eps)) * (vv * vv - 1.0) * vv -
                               0.5 * width * (vv + 1.0) * dk * dp;
      const double grad_term = params.c_p * eps * dv / h;  // pairs with xi_j' = -+1/h
      g[cell] += w * (pointwise * (1.0 - r) - grad_term);
      g[cell + 1] += w * (pointwise * r + grad_term);
    }
  }
  return g;
}

DesignEvaluation evaluate_design(const FeFunction& v, const DesignParams& params,
                                 const BeamProblem& problem, const FeFunction* warm_phase,
                                 const NewtonOptions& options, int coarse_level) {
  BeamProblem pb = problem;
  pb.material = Material::from_phase_field(v, pb.a, pb.b);

  DesignEvaluation out;
  bool solved = false;
  if (warm_phase != nullptr) {
    out.state = newton_solve(*warm_phase, pb, options);
    solved = out.state.converged;
  }
  if (!solved) {
    const int fine = v.grid().level();
    MultilevelResult ml =
        multilevel_solve(pb, std::min(coarse_level, fine), fine, nullptr, options);
    out.state = std::move(ml.solution);
    if (!out.state.converged)
      throw SolveError("state solve did not converge for the given design");
  }
  out.parts = compliance(out.state.phase, v, params, pb);
  out.cost = out.parts.total();
  return out;
}

FdCheckResult fd_gradient_check(const FeFunction& v, const DesignParams& params,
                                const BeamProblem& problem, double step, int num_directions,
                                unsigned seed) {
  if (!(step > 0.0)) throw ConfigError("finite-difference step must be positive");
  NewtonOptions tight;
  tight.tolerance = 1e-13;
  tight.max_iterations = 100;

  const DesignEvaluation base = evaluate_design(v, params, problem, nullptr, tight);
  const AdjointSolution adj = adjoint_solve(base.state, v, problem);
  const std::vector<double> g = reduced_gradient(v, base.state.phase, adj.adjoint, params,
                                                 problem);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  FdCheckResult out;
  const int n = v.grid().num_nodes();
  for (int dir = 0; dir < num_directions; ++dir) {
    std::vector<double> w(n);
    for (double& x : w) x = unit(rng);

    FeFunction plus = v, minus = v;
    for (int i = 0; i < n; ++i) {
      plus[i] += step * w[i];
      minus[i] -= step * w[i];
    }
    const double j_plus =
        evaluate_design(plus, params, problem, &base.state.phase, tight).cost;
    const double j_minus =
        evaluate_design(minus, params, problem, &base.state.phase, tight).cost;
    const double fd = (j_plus - j_minus) / (2.0 * step);
    const double gw = dot(g, w);
    const double scale = std::max({std::abs(fd), std::abs(gw), 1e-300});
    const double rel = std::abs(fd - gw) / scale;
    out.per_direction.push_back(rel);
    out.max_relative_error = std::max(out.max_relative_error, rel);
  }
  return out;
}

}  // namespace elastica
