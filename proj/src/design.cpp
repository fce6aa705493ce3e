#include "elastica/design.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "elastica/errors.hpp"

namespace elastica {

double lambda_threshold(double a, double b, double c_l) {
  if (!(a > 0.0 && a < b)) throw ConfigError("lambda threshold requires 0 < a < b");
  if (!(c_l > 0.0)) throw ConfigError("lambda threshold requires c_l > 0");
  return c_l / (1.0 / a - 1.0 / b);
}

double perimeter(const FeFunction& v, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  const UniformGrid& grid = v.grid();
  const QuadratureRule& rule = default_rule();
  const double h = grid.spacing();
  double sum = 0.0;
  for (int cell = 0; cell < grid.num_cells(); ++cell) {
    const double dv = v.deriv_on_cell(cell);
    for (int q = 0; q < rule.points_per_cell(); ++q) {
      const double r = rule.points()[q];
      const double vv = (1.0 - r) * v[cell] + r * v[cell + 1];
      const double well = vv * vv - 1.0;
      sum += h * rule.weights()[q] * 0.5 *
             (epsilon * dv * dv + (9.0 / 16.0) / epsilon * well * well);
    }
  }
  return sum;
}

double length_hard(const FeFunction& v) {
  return integrate([&v](double t) { return chi(v.eval(t)); }, v.grid());
}

std::vector<double> extract_interfaces(const FeFunction& v, double merge_distance) {
  const UniformGrid& grid = v.grid();
  std::vector<double> crossings;
  for (int cell = 0; cell < grid.num_cells(); ++cell) {
    const double l = v[cell];
    const double r = v[cell + 1];
    if (l == 0.0 && r == 0.0) continue;
    if ((l <= 0.0 && r > 0.0) || (l >= 0.0 && r < 0.0) || (l > 0.0 && r <= 0.0) ||
        (l < 0.0 && r >= 0.0)) {
      if (l == 0.0 && cell > 0) continue;  // already counted at the left node
      const double t = grid.node(cell) + grid.spacing() * (l / (l - r));
      crossings.push_back(t);
    }
  }
  std::sort(crossings.begin(), crossings.end());
  std::vector<double> merged;
  for (double t : crossings) {
    if (merged.empty() || t - merged.back() >= merge_distance) merged.push_back(t);
  }
  return merged;
}

OrderedCheck check_ordered(const FeFunction& v, double epsilon) {
  OrderedCheck out;
  const std::vector<double> crossings = extract_interfaces(v, 2.0 * epsilon);
  if (crossings.size() != 1) return out;
  const double t_star = crossings.front();
  const double band = 4.0 * epsilon;
  const UniformGrid& grid = v.grid();
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const double t = grid.node(n);
    if (std::abs(t - t_star) <= band) continue;
    if (t < t_star && !(v[n] >= 0.9)) return out;
    if (t > t_star && !(v[n] <= -0.9)) return out;
  }
  out.ordered = true;
  out.t_star = t_star;
  return out;
}

int OptimalityReport::violation_count() const {
  int count = 0;
  for (const auto& c : cells)
    if (c.violation > 0.0) ++count;
  return count;
}

double OptimalityReport::max_violation_outside(const std::vector<double>& interfaces,
                                               double band_halfwidth) const {
  double worst = 0.0;
  for (const auto& c : cells) {
    bool in_band = false;
    for (double t : interfaces)
      if (std::abs(c.t_mid - t) <= band_halfwidth) in_band = true;
    if (!in_band) worst = std::max(worst, c.violation);
  }
  return worst;
}

OptimalityReport check_optimality_condition(const std::vector<double>& theta_cells,
                                            const std::vector<double>& t_mid,
                                            const std::vector<double>& k,
                                            const std::vector<double>& p, double lambda) {
  if (theta_cells.size() != k.size() || k.size() != p.size() || t_mid.size() != k.size())
    throw ConfigError("optimality check requires matching per-cell arrays");
  OptimalityReport report;
  report.lambda = lambda;
  report.tolerance = 0.05 * lambda;
  for (size_t i = 0; i < k.size(); ++i) {
    OptimalityReport::Cell cell;
    cell.cell = static_cast<int>(i);
    cell.t_mid = t_mid[i];
    cell.theta = theta_cells[i];
    cell.kp = k[i] * p[i];
    if (cell.theta < 0.05) {
      cell.phase = OptimalityReport::kSoft;
      cell.violation = std::max(0.0, cell.kp - lambda - report.tolerance);
    } else if (cell.theta > 0.95) {
      cell.phase = OptimalityReport::kHard;
      cell.violation = std::max(0.0, lambda - cell.kp - report.tolerance);
    } else {
      cell.phase = OptimalityReport::kIntermediate;
      cell.violation = std::max(0.0, std::abs(cell.kp - lambda) - report.tolerance);
    }
    report.cells.push_back(cell);
  }
  return report;
}

OptimalityReport check_optimality_condition(const FeFunction& v, const std::vector<double>& k,
                                            const std::vector<double>& p, double lambda) {
  const UniformGrid& grid = v.grid();
  std::vector<double> theta(grid.num_cells()), t_mid(grid.num_cells());
  for (int cell = 0; cell < grid.num_cells(); ++cell) {
    const double vm = 0.5 * (v[cell] + v[cell + 1]);
    theta[cell] = std::clamp(chi(vm), 0.0, 1.0);
    t_mid[cell] = grid.cell_midpoint(cell);
  }
  return check_optimality_condition(theta, t_mid, k, p, lambda);
}

FeFunction named_phase_field_initialization(const UniformGrid& grid, std::string_view name,
                                            unsigned seed) {
  if (name == "undecided" || name == "zero") return FeFunction::zero(grid);
  if (name == "all-soft") return FeFunction::constant(grid, -1.0);
  if (name == "all-hard") return FeFunction::constant(grid, 1.0);
  if (name == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    FeFunction v = FeFunction::zero(grid);
    for (int n = 0; n < grid.num_nodes(); ++n) v[n] = dist(rng);
    return v;
  }
  throw ConfigError("unknown phase-field initialization '" + std::string(name) +
                    "' (expected undecided, all-soft, all-hard, or random)");
}

namespace {

// Dense inverse-Hessian approximation; n is a few hundred here.
class InverseHessian {
public:
  explicit InverseHessian(int n) : n_(n) { reset(); }

  void reset(double scale = 1.0) {
    h_.assign(static_cast<size_t>(n_) * n_, 0.0);
    for (int i = 0; i < n_; ++i) h_[static_cast<size_t>(i) * n_ + i] = scale;
  }

  std::vector<double> apply(const std::vector<double>& g) const {
    std::vector<double> out(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      const double* row = &h_[static_cast<size_t>(i) * n_];
      double s = 0.0;
      for (int j = 0; j < n_; ++j) s += row[j] * g[j];
      out[i] = s;
    }
    return out;
  }

  // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
  void update(const std::vector<double>& s, const std::vector<double>& y) {
    const double sy = dot(s, y);
    if (!(sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y)))) return;
    const double rho = 1.0 / sy;
    const std::vector<double> hy = apply(y);
    const double yhy = dot(y, hy);
    const double c = rho * rho * yhy + rho;
    for (int i = 0; i < n_; ++i) {
      double* row = &h_[static_cast<size_t>(i) * n_];
      for (int j = 0; j < n_; ++j)
        row[j] += c * s[i] * s[j] - rho * (s[i] * hy[j] + hy[i] * s[j]);
    }
  }

private:
  int n_;
  std::vector<double> h_;
};

}  // namespace

DesignResult bfgs_optimize(const FeFunction& v_init, const DesignParams& params,
                           const BeamProblem& problem, const BfgsOptions& options) {
  problem.validate();
  if (!(problem.a < problem.b))
    throw ConfigError("design optimization requires two distinct materials (a < b)");
  const UniformGrid& grid = v_init.grid();
  const int n = grid.num_nodes();

  // First state solve selects the branch; afterwards every solve warm-starts
  // from the previous phase, falling back to multilevel from zero.
  FeFunction v = v_init;
  BeamProblem pb = problem;
  pb.material = Material::from_phase_field(v, pb.a, pb.b);
  const int coarse = std::min(options.coarse_level, grid.level());
  const FeFunction coarse_init = named_state_initialization(UniformGrid(coarse),
                                                            options.state_init);
  MultilevelResult first = multilevel_solve(pb, coarse, grid.level(), &coarse_init,
                                            options.newton);
  if (!first.solution.converged)
    throw SolveError("initial state solve did not converge for the design problem");

  DesignEvaluation eval;
  eval.state = std::move(first.solution);
  eval.parts = compliance(eval.state.phase, v, params, pb);
  eval.cost = eval.parts.total();

  AdjointSolution adj = adjoint_solve(eval.state, v, problem);
  std::vector<double> g = reduced_gradient(v, eval.state.phase, adj.adjoint, params, problem);

  DesignResult result{v,     eval.state, adj, {eval.cost}, {inf_norm(g)}, {}, false, 0.0, {},
                      false, false,      0};

  InverseHessian hess(n);
  bool scaled_once = false;

  int iter = 0;
  while (iter < options.max_iterations) {
    const double grad_norm = inf_norm(g);
    if (grad_norm <= options.grad_tolerance_rel * (1.0 + std::abs(eval.cost))) {
      result.converged = true;
      break;
    }

    std::vector<double> d = hess.apply(g);
    for (double& x : d) x = -x;
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      hess.reset();
      scaled_once = true;  // keep the plain identity from here on
      d = g;
      for (double& x : d) x = -x;
      slope = dot(g, d);
    }

    bool accepted = false;
    bool reset_used = false;
    FeFunction v_next = v;
    DesignEvaluation eval_next;
    while (!accepted) {
      double alpha = 1.0;
      for (int halving = 0; halving <= options.max_halvings; ++halving) {
        for (int i = 0; i < n; ++i) v_next[i] = v[i] + alpha * d[i];
        bool solvable = true;
        try {
          eval_next = evaluate_design(v_next, params, problem, &eval.state.phase,
                                      options.newton, options.coarse_level);
        } catch (const SolveError&) {
          solvable = false;
        }
        if (solvable && eval_next.cost <= eval.cost + options.armijo_c1 * alpha * slope) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (accepted || reset_used) break;
      // One retry along steepest descent before giving up.
      reset_used = true;
      hess.reset();
      d = g;
      for (double& x : d) x = -x;
      slope = dot(g, d);
    }
    if (!accepted) {
      result.line_search_failed = true;
      break;
    }

    AdjointSolution adj_next = adjoint_solve(eval_next.state, v_next, problem);
    std::vector<double> g_next =
        reduced_gradient(v_next, eval_next.state.phase, adj_next.adjoint, params, problem);

    std::vector<double> s(n), y(n);
    for (int i = 0; i < n; ++i) {
      s[i] = v_next[i] - v[i];
      y[i] = g_next[i] - g[i];
    }
    if (!scaled_once) {
      const double sy = dot(s, y);
      const double yy = dot(y, y);
      if (sy > 0.0 && yy > 0.0) {
        hess.reset(sy / yy);
        scaled_once = true;
      }
    }
    hess.update(s, y);

    v = std::move(v_next);
    eval = std::move(eval_next);
    adj = std::move(adj_next);
    g = std::move(g_next);
    ++iter;
    result.cost_history.push_back(eval.cost);
    result.gradient_norm_history.push_back(inf_norm(g));
  }

  result.phase_field = v;
  result.state = eval.state;
  result.adjoint = adj;
  result.iterations = iter;
  result.interfaces = extract_interfaces(v, 2.0 * params.epsilon);
  const OrderedCheck oc = check_ordered(v, params.epsilon);
  result.ordered = oc.ordered;
  result.t_star = oc.t_star;
  result.optimality = check_optimality_condition(
      v, result.state.shear, result.adjoint.flux,
      lambda_threshold(problem.a, problem.b, params.c_l));
  return result;
}

}  // namespace elastica
