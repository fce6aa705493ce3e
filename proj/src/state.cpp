#include "elastica/state.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "elastica/errors.hpp"

namespace elastica {

void BeamProblem::validate() const {
  if (!(a > 0.0)) throw ConfigError("material bound a must be positive");
  if (!(a <= b)) throw ConfigError("material bounds require a < b (or a == b)");
  if (!(delta >= 0.0)) throw ConfigError("force magnitude delta must be >= 0");
  for (const auto& pc : constraints) {
    if (!(pc.time > 0.0 && pc.time <= 1.0))
      throw ConfigError("constraint time must lie in (0, 1]");
    if (!(pc.weight > 0.0)) throw ConfigError("constraint weight must be positive");
  }
}

namespace {

struct QuadPoint {
  int cell;
  double ref;  // position within the cell, in [0,1]
  double t;
  double w;
};

// Quadrature covering [0, tc]: all complete cells plus a Gauss rule mapped
// onto the partial remainder.
std::vector<QuadPoint> cumulative_points(const UniformGrid& grid, const QuadratureRule& rule,
                                         double tc) {
  const double h = grid.spacing();
  int full = std::min(static_cast<int>(std::floor(tc / h + 1e-12)), grid.num_cells());
  while (full > 0 && grid.node(full) > tc + 1e-15) --full;
  std::vector<QuadPoint> pts;
  pts.reserve(static_cast<size_t>(full + 1) * rule.points_per_cell());
  for (int cell = 0; cell < full; ++cell) {
    const double left = grid.node(cell);
    for (int q = 0; q < rule.points_per_cell(); ++q) {
      const double r = rule.points()[q];
      pts.push_back({cell, r, left + h * r, h * rule.weights()[q]});
    }
  }
  const double rem = tc - grid.node(full);
  if (rem > 1e-14 && full < grid.num_cells()) {
    const double left = grid.node(full);
    for (int q = 0; q < rule.points_per_cell(); ++q) {
      const double t = left + rem * rule.points()[q];
      pts.push_back({full, (t - left) / h, t, rem * rule.weights()[q]});
    }
  }
  return pts;
}

struct Assembly {
  double energy = 0.0;
  std::vector<double> residual;
  BandedPlusLowRank op{TridiagonalMatrix(0)};
  bool with_matrix = false;
};

Assembly assemble(const FeFunction& K, const BeamProblem& pb, const QuadratureRule& rule,
                  bool with_matrix) {
  const UniformGrid& grid = K.grid();
  const int n = grid.num_nodes();
  const double h = grid.spacing();
  const double clamp = pb.clamp_angle;

  Assembly out;
  out.with_matrix = with_matrix;
  out.residual.assign(n, 0.0);
  TridiagonalMatrix m(with_matrix ? n : 0);

  for (int cell = 0; cell < grid.num_cells(); ++cell) {
    const double left = grid.node(cell);
    const double kl = K[cell];
    const double kr = K[cell + 1];
    const double dk = (kr - kl) / h;
    for (int q = 0; q < rule.points_per_cell(); ++q) {
      const double r = rule.points()[q];
      const double t = left + h * r;
      const double w = h * rule.weights()[q];
      const double a_t = pb.material(t);
      const double angle = (1.0 - r) * kl + r * kr + clamp;
      const double s = std::sin(angle);
      const double c = std::cos(angle);
      const double load = pb.delta * (1.0 - t);

      out.energy += w * (0.5 * a_t * dk * dk + load * s);

      const double flux = a_t * dk / h;
      out.residual[cell] += w * (-flux + load * c * (1.0 - r));
      out.residual[cell + 1] += w * (flux + load * c * r);

      if (with_matrix) {
        const double stiff = a_t / (h * h);
        const double mass = -load * s;
        m.diag[cell] += w * (stiff + mass * (1.0 - r) * (1.0 - r));
        m.diag[cell + 1] += w * (stiff + mass * r * r);
        const double off = w * (-stiff + mass * r * (1.0 - r));
        m.upper[cell] += off;
        m.lower[cell] += off;
      }
    }
  }

  BandedPlusLowRank op(std::move(m));

  for (const auto& pc : pb.constraints) {
    const auto pts = cumulative_points(grid, rule, pc.time);
    double gx = 0.0, gy = 0.0;
    for (const auto& p : pts) {
      const double angle = (1.0 - p.ref) * K[p.cell] + p.ref * K[p.cell + 1] + clamp;
      gx += p.w * std::cos(angle);
      gy += p.w * std::sin(angle);
    }
    const double ex = gx - pc.target_x;
    const double ey = gy - pc.target_y;
    out.energy += pc.weight * (ex * ex + ey * ey);

    std::vector<double> jx(n, 0.0), jy(n, 0.0);
    for (const auto& p : pts) {
      const double angle = (1.0 - p.ref) * K[p.cell] + p.ref * K[p.cell + 1] + clamp;
      const double s = std::sin(angle);
      const double c = std::cos(angle);
      jx[p.cell] += p.w * (-s) * (1.0 - p.ref);
      jx[p.cell + 1] += p.w * (-s) * p.ref;
      jy[p.cell] += p.w * c * (1.0 - p.ref);
      jy[p.cell + 1] += p.w * c * p.ref;
      if (with_matrix) {
        // Curvature of gamma contributes a banded block.
        const double factor = 2.0 * pc.weight * (ex * (-c) + ey * (-s)) * p.w;
        op.banded.diag[p.cell] += factor * (1.0 - p.ref) * (1.0 - p.ref);
        op.banded.diag[p.cell + 1] += factor * p.ref * p.ref;
        const double off = factor * (1.0 - p.ref) * p.ref;
        op.banded.upper[p.cell] += off;
        op.banded.lower[p.cell] += off;
      }
    }
    for (int i = 0; i < n; ++i) out.residual[i] += 2.0 * pc.weight * (ex * jx[i] + ey * jy[i]);
    if (with_matrix) {
      auto scaled = [&](const std::vector<double>& j) {
        std::vector<double> u(j);
        for (double& x : u) x *= 2.0 * pc.weight;
        return u;
      };
      op.u.push_back(scaled(jx));
      op.v.push_back(std::move(jx));
      op.u.push_back(scaled(jy));
      op.v.push_back(std::move(jy));
    }
  }

  // Clamped node: zero increment, unit diagonal.
  out.residual[0] = 0.0;
  if (with_matrix) {
    op.banded.diag[0] = 1.0;
    if (n > 1) {
      op.banded.upper[0] = 0.0;
      op.banded.lower[0] = 0.0;
    }
    for (auto& vec : op.u) vec[0] = 0.0;
    for (auto& vec : op.v) vec[0] = 0.0;
  }
  out.op = std::move(op);
  return out;
}

void require_clamped(const FeFunction& phase) {
  if (phase[0] != 0.0)
    throw ConfigError("the phase must vanish at the clamped node (K(0) = 0)");
}

}  // namespace

double state_energy(const FeFunction& k_phase, const BeamProblem& problem,
                    const QuadratureRule& rule) {
  require_clamped(k_phase);
  return assemble(k_phase, problem, rule, false).energy;
}

std::vector<double> state_residual(const FeFunction& k_phase, const BeamProblem& problem,
                                   const QuadratureRule& rule) {
  require_clamped(k_phase);
  return assemble(k_phase, problem, rule, false).residual;
}

TridiagonalMatrix state_hessian(const FeFunction& k_phase, const BeamProblem& problem,
                                const QuadratureRule& rule) {
  require_clamped(k_phase);
  return assemble(k_phase, problem, rule, true).op.banded;
}

BandedPlusLowRank state_hessian_operator(const FeFunction& k_phase, const BeamProblem& problem,
                                         const QuadratureRule& rule) {
  require_clamped(k_phase);
  return assemble(k_phase, problem, rule, true).op;
}

std::vector<double> shear_field(const FeFunction& k_phase, const BeamProblem& problem) {
  const UniformGrid& grid = k_phase.grid();
  std::vector<double> k(grid.num_cells());
  for (int cell = 0; cell < grid.num_cells(); ++cell)
    k[cell] = problem.material(grid.cell_midpoint(cell)) * k_phase.deriv_on_cell(cell);
  return k;
}

StateSolution newton_solve(const FeFunction& initial_phase, const BeamProblem& problem,
                           const NewtonOptions& options) {
  problem.validate();
  require_clamped(initial_phase);
  const QuadratureRule& rule = default_rule();
  const int n = initial_phase.grid().num_nodes();

  FeFunction phase = initial_phase;
  Assembly current = assemble(phase, problem, rule, true);
  double res_norm = inf_norm(current.residual);

  StateSolution out{phase, {}, current.energy, 0, res_norm, false, {current.energy}};

  int iter = 0;
  while (res_norm > options.tolerance && iter < options.max_iterations) {
    bool pd = false;
    std::vector<double> step;
    try {
      step = current.op.solve(current.residual, &pd);
    } catch (const SingularMatrixError& e) {
      throw SolveError(std::string("newton: singular second-derivative matrix: ") + e.what());
    }

    // Backtracking: descend on the energy while the factorization is positive
    // definite (this selects minimizers), otherwise on the residual norm
    // (this tracks the other stationary points).
    FeFunction trial = phase;
    Assembly next;
    double next_norm = 0.0;
    bool accepted = false;
    const int max_halvings = options.damped ? 30 : 0;
    for (int pass = 0; pass < 2 && !accepted; ++pass) {
      const bool energy_mode = pd && pass == 0;
      const double slope = -dot(current.residual, step);
      double alpha = 1.0;
      for (int halving = 0; halving <= max_halvings; ++halving) {
        for (int i = 0; i < n; ++i) trial[i] = phase[i] - alpha * step[i];
        trial[0] = 0.0;
        next = assemble(trial, problem, rule, true);
        next_norm = inf_norm(next.residual);
        bool ok = std::isfinite(next_norm) && std::isfinite(next.energy);
        if (ok && options.damped && next_norm > options.tolerance) {
          ok = energy_mode ? next.energy <= current.energy + 1e-4 * alpha * slope
                           : next_norm <= (1.0 - 1e-4 * alpha) * res_norm;
        }
        if (ok) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!pd) break;  // no second pass to run
    }
    if (!accepted) break;  // reported below as non-convergence

    phase = trial;
    current = std::move(next);
    res_norm = next_norm;
    ++iter;
    out.energy_history.push_back(current.energy);
  }

  out.phase = phase;
  out.shear = shear_field(phase, problem);
  out.energy = current.energy;
  out.newton_iterations = iter;
  out.final_residual_norm = res_norm;
  out.converged = res_norm <= options.tolerance;
  return out;
}

MultilevelResult multilevel_solve(const BeamProblem& problem, int coarse_level, int fine_level,
                                  const FeFunction* initial_coarse_phase,
                                  const NewtonOptions& options) {
  if (coarse_level < 1 || fine_level < coarse_level)
    throw ConfigError("multilevel solve requires 1 <= coarse level <= fine level");
  FeFunction phase = initial_coarse_phase ? *initial_coarse_phase
                                          : FeFunction::zero(UniformGrid(coarse_level));
  if (phase.grid().level() != coarse_level)
    throw ConfigError("initial phase must live on the coarse level");

  MultilevelResult out;
  for (int level = coarse_level;; ++level) {
    StateSolution sol;
    try {
      sol = newton_solve(phase, problem, options);
    } catch (const Error& e) {
      throw SolveError("level " + std::to_string(level) + ": " + e.what());
    }
    out.iterations_per_level.push_back(sol.newton_iterations);
    if (!sol.converged && out.first_unconverged_level < 0)
      out.first_unconverged_level = level;
    if (level == fine_level) {
      out.solution = std::move(sol);
      break;
    }
    phase = sol.phase.prolongate();
  }
  return out;
}

Curve reconstruct_curve(const FeFunction& k_phase, double clamp_angle,
                        const QuadratureRule& rule) {
  const UniformGrid& grid = k_phase.grid();
  const double h = grid.spacing();
  Curve curve;
  curve.x.assign(grid.num_nodes(), 0.0);
  curve.y.assign(grid.num_nodes(), 0.0);
  double x = 0.0, y = 0.0;
  for (int cell = 0; cell < grid.num_cells(); ++cell) {
    const double kl = k_phase[cell];
    const double kr = k_phase[cell + 1];
    for (int q = 0; q < rule.points_per_cell(); ++q) {
      const double r = rule.points()[q];
      const double w = h * rule.weights()[q];
      const double angle = (1.0 - r) * kl + r * kr + clamp_angle;
      x += w * std::cos(angle);
      y += w * std::sin(angle);
    }
    curve.x[cell + 1] = x;
    curve.y[cell + 1] = y;
  }
  return curve;
}

std::array<double, 2> curve_point(const FeFunction& k_phase, double clamp_angle, double t,
                                  const QuadratureRule& rule) {
  const auto pts = cumulative_points(k_phase.grid(), rule, t);
  double x = 0.0, y = 0.0;
  for (const auto& p : pts) {
    const double angle =
        (1.0 - p.ref) * k_phase[p.cell] + p.ref * k_phase[p.cell + 1] + clamp_angle;
    x += p.w * std::cos(angle);
    y += p.w * std::sin(angle);
  }
  return {x, y};
}

FeFunction named_state_initialization(const UniformGrid& grid, std::string_view name) {
  const double pi = 3.14159265358979323846;
  if (name == "zero" || name == "simple") return FeFunction::zero(grid);
  if (name == "twisted")
    return FeFunction::sample(grid, [pi](double t) { return -2.0 * pi * t; });
  if (name == "s-shape")
    return FeFunction::sample(grid, [pi](double t) { return -0.5 * pi * std::sin(2.0 * pi * t); });
  throw ConfigError("unknown state initialization '" + std::string(name) +
                    "' (expected zero, twisted, or s-shape)");
}

}  // namespace elastica
