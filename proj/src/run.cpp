#include "elastica/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "elastica/errors.hpp"

namespace elastica {

namespace {

using nlohmann::json;

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double x = std::stod(value, &used);
    while (used < value.size() && std::isspace(static_cast<unsigned char>(value[used]))) ++used;
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as a number");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double x = parse_double(key, value);
  if (x != std::floor(x)) throw ConfigError("config key '" + key + "' expects an integer");
  return static_cast<int>(x);
}

std::string trim(const std::string& s) {
  size_t lo = 0, hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  return s.substr(lo, hi - lo);
}

std::vector<int> parse_periods(const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_int("periods", item));
  }
  if (out.empty()) throw ConfigError("config key 'periods' expects a comma-separated list");
  return out;
}

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::vector<PointConstraint> parse_constraints(const std::string& text) {
  std::vector<PointConstraint> out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::string cleaned;
    for (char c : group)
      if (c != '(' && c != ')' && !std::isspace(static_cast<unsigned char>(c))) cleaned += c;
    if (cleaned.empty()) continue;
    std::vector<double> parts;
    std::stringstream fields(cleaned);
    std::string field;
    while (std::getline(fields, field, ',')) parts.push_back(parse_double("constraints", field));
    if (parts.size() != 3 && parts.size() != 4)
      throw ConfigError("config key 'constraints' expects (t, x, y[, weight]) groups");
    PointConstraint pc;
    pc.time = parts[0];
    pc.target_x = parts[1];
    pc.target_y = parts[2];
    if (parts.size() == 4) pc.weight = parts[3];
    out.push_back(pc);
  }
  return out;
}

void apply_config_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "command") c.command = value;
  else if (key == "level_coarse") c.level_coarse = parse_int(key, value);
  else if (key == "level_fine") c.level_fine = parse_int(key, value);
  else if (key == "delta") c.delta = parse_double(key, value);
  else if (key == "K0") c.clamp_angle = parse_double(key, value);
  else if (key == "a") c.a = parse_double(key, value);
  else if (key == "b") c.b = parse_double(key, value);
  else if (key == "cl") c.c_l = parse_double(key, value);
  else if (key == "cp") c.c_p = parse_double(key, value);
  else if (key == "eps") c.epsilon = parse_double(key, value);
  else if (key == "init") c.init = value;
  else if (key == "state_init") c.state_init = value;
  else if (key == "constraints") c.constraints = parse_constraints(value);
  else if (key == "out") c.out_dir = value;
  else if (key == "seed") c.seed = static_cast<unsigned>(parse_int(key, value));
  else if (key == "theta") c.theta = parse_double(key, value);
  else if (key == "periods") c.periods = parse_periods(value);
  else if (key == "workers") c.workers = parse_int(key, value);
  else if (key == "newton_tol") c.newton_tolerance = parse_double(key, value);
  else if (key == "newton_max_iter") c.newton_max_iterations = parse_int(key, value);
  else if (key == "bfgs_grad_tol") c.bfgs_grad_tolerance = parse_double(key, value);
  else if (key == "bfgs_max_iter") c.bfgs_max_iterations = parse_int(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file '" + file.string() + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(file.string() + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    apply_config_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void resolve_config(ExperimentConfig& c) {
  static const std::vector<std::string> commands = {"solve-state", "optimize-design",
                                                    "homogenize", "verify", "sweep"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
    throw ConfigError("unknown command '" + c.command + "'");

  const bool design = c.command == "optimize-design" || c.command == "verify";
  if (c.level_fine == 0) c.level_fine = c.command == "homogenize" ? 11 : 9;
  if (c.level_coarse < 1) throw ConfigError("config key 'level_coarse' must be >= 1");
  if (c.level_fine < c.level_coarse)
    throw ConfigError("config key 'level_fine' must be >= level_coarse");
  if (c.level_fine > 26) throw ConfigError("config key 'level_fine' must be <= 26");
  if (c.epsilon < 0.0) c.epsilon = 1.0 / (1 << c.level_fine);
  if (!(c.epsilon > 0.0)) throw ConfigError("config key 'eps' must be positive");
  if (c.init.empty()) c.init = design ? "undecided" : "zero";
  if (!(c.a > 0.0)) throw ConfigError("config key 'a' must be positive");
  if (!(c.a <= c.b))
    throw ConfigError("config keys 'a'/'b' violate the a < b requirement (got a = " +
                      format_g17(c.a) + ", b = " + format_g17(c.b) + ")");
  if (design && !(c.a < c.b))
    throw ConfigError("design optimization requires a < b strictly");
  if (!(c.delta >= 0.0)) throw ConfigError("config key 'delta' must be >= 0");
  if (design && !(c.c_l > 0.0)) throw ConfigError("config key 'cl' must be positive");
  if (c.c_p < 0.0) throw ConfigError("config key 'cp' must be >= 0");
  if (!(c.theta >= 0.0 && c.theta <= 1.0))
    throw ConfigError("config key 'theta' must lie in [0,1]");
  for (int n : c.periods)
    if (n < 1) throw ConfigError("config key 'periods' entries must be >= 1");
  if (c.workers < 1) throw ConfigError("config key 'workers' must be >= 1");
  for (const auto& pc : c.constraints) {
    if (!(pc.time > 0.0 && pc.time <= 1.0))
      throw ConfigError("config key 'constraints': times must lie in (0, 1]");
    if (!(pc.weight > 0.0))
      throw ConfigError("config key 'constraints': weights must be positive");
  }
  if (!(c.newton_tolerance > 0.0)) throw ConfigError("config key 'newton_tol' must be positive");
  if (c.newton_max_iterations < 0)
    throw ConfigError("config key 'newton_max_iter' must be >= 0");
  if (!(c.bfgs_grad_tolerance > 0.0))
    throw ConfigError("config key 'bfgs_grad_tol' must be positive");
  if (c.bfgs_max_iterations < 1) throw ConfigError("config key 'bfgs_max_iter' must be >= 1");
}

std::string config_to_text(const ExperimentConfig& c) {
  std::map<std::string, std::string> kv;
  kv["command"] = c.command;
  kv["level_coarse"] = std::to_string(c.level_coarse);
  kv["level_fine"] = std::to_string(c.level_fine);
  kv["delta"] = format_g17(c.delta);
  kv["K0"] = format_g17(c.clamp_angle);
  kv["a"] = format_g17(c.a);
  kv["b"] = format_g17(c.b);
  kv["cl"] = format_g17(c.c_l);
  kv["cp"] = format_g17(c.c_p);
  kv["eps"] = format_g17(c.epsilon);
  kv["init"] = c.init;
  kv["state_init"] = c.state_init;
  kv["out"] = c.out_dir;
  kv["seed"] = std::to_string(c.seed);
  kv["theta"] = format_g17(c.theta);
  kv["workers"] = std::to_string(c.workers);
  kv["newton_tol"] = format_g17(c.newton_tolerance);
  kv["newton_max_iter"] = std::to_string(c.newton_max_iterations);
  kv["bfgs_grad_tol"] = format_g17(c.bfgs_grad_tolerance);
  kv["bfgs_max_iter"] = std::to_string(c.bfgs_max_iterations);
  {
    std::string p;
    for (size_t i = 0; i < c.periods.size(); ++i)
      p += (i ? "," : "") + std::to_string(c.periods[i]);
    kv["periods"] = p;
  }
  if (!c.constraints.empty()) {
    std::string s;
    for (size_t i = 0; i < c.constraints.size(); ++i) {
      const auto& pc = c.constraints[i];
      if (i) s += "; ";
      s += "(" + format_g17(pc.time) + ", " + format_g17(pc.target_x) + ", " +
           format_g17(pc.target_y) + ", " + format_g17(pc.weight) + ")";
    }
    kv["constraints"] = s;
  }
  std::string out;
  for (const auto& [key, value] : kv) out += key + " = " + value + "\n";
  return out;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["command"] = c.command;
  j["level_coarse"] = c.level_coarse;
  j["level_fine"] = c.level_fine;
  j["delta"] = c.delta;
  j["K0"] = c.clamp_angle;
  j["a"] = c.a;
  j["b"] = c.b;
  j["cl"] = c.c_l;
  j["cp"] = c.c_p;
  j["eps"] = c.epsilon;
  j["init"] = c.init;
  j["state_init"] = c.state_init;
  j["out"] = c.out_dir;
  j["seed"] = c.seed;
  j["theta"] = c.theta;
  j["periods"] = c.periods;
  j["workers"] = c.workers;
  j["newton_tol"] = c.newton_tolerance;
  j["newton_max_iter"] = c.newton_max_iterations;
  j["bfgs_grad_tol"] = c.bfgs_grad_tolerance;
  j["bfgs_max_iter"] = c.bfgs_max_iterations;
  json cs = json::array();
  for (const auto& pc : c.constraints)
    cs.push_back({{"t", pc.time}, {"x", pc.target_x}, {"y", pc.target_y}, {"w", pc.weight}});
  j["constraints"] = cs;
  return j;
}

namespace {

std::vector<double> cells_to_nodes(const std::vector<double>& cell_values) {
  const int cells = static_cast<int>(cell_values.size());
  std::vector<double> nodes(cells + 1, 0.0);
  if (cells == 0) return nodes;
  nodes[0] = cell_values[0];
  for (int n = 1; n < cells; ++n) nodes[n] = 0.5 * (cell_values[n - 1] + cell_values[n]);
  nodes[cells] = cell_values[cells - 1];
  return nodes;
}

// Nodal table shared by every pipeline; v is either the actual phase field or
// a profile derived from the material.
json build_data(const StateSolution& state, const FeFunction& v,
                const AdjointSolution& adjoint, const BeamProblem& pb) {
  const UniformGrid& grid = state.phase.grid();
  json data;
  std::vector<double> t(grid.num_nodes()), theta(grid.num_nodes());
  for (int n = 0; n < grid.num_nodes(); ++n) {
    t[n] = grid.node(n);
    theta[n] = std::clamp(chi(v[n]), 0.0, 1.0);
  }
  const Curve curve = reconstruct_curve(state.phase, pb.clamp_angle);
  data["t"] = t;
  data["K"] = state.phase.coeffs();
  data["v"] = v.coeffs();
  data["theta"] = theta;
  data["k"] = cells_to_nodes(state.shear);
  data["P"] = adjoint.adjoint.coeffs();
  data["p"] = cells_to_nodes(adjoint.flux);
  data["k_cells"] = state.shear;
  data["p_cells"] = adjoint.flux;
  data["curve_x"] = curve.x;
  data["curve_y"] = curve.y;
  return data;
}

FeFunction derived_phase_field(const UniformGrid& grid, const BeamProblem& pb) {
  FeFunction v = FeFunction::zero(grid);
  for (int n = 0; n < grid.num_nodes(); ++n) {
    double theta = 0.0;
    if (pb.b > pb.a) {
      theta = std::clamp((pb.material(grid.node(n)) - pb.a) / (pb.b - pb.a), 0.0, 1.0);
    }
    v[n] = v_of_theta(theta);
  }
  return v;
}

json state_to_json(const StateSolution& s) {
  json j;
  j["converged"] = s.converged;
  j["newton_iterations"] = s.newton_iterations;
  j["final_residual_norm"] = s.final_residual_norm;
  j["energy"] = s.energy;
  j["energy_history"] = s.energy_history;
  j["K_end"] = s.phase.coeffs().back();
  return j;
}

json adjoint_to_json(const AdjointSolution& adj, const BeamProblem& pb, double spacing) {
  json j;
  j["P0"] = adj.adjoint.coeffs().front();
  j["p_first_cell"] = adj.flux.empty() ? 0.0 : adj.flux.front();
  j["p_last_cell"] = adj.flux.empty() ? 0.0 : adj.flux.back();
  if (pb.delta > 0.0 && adj.flux.size() >= 2) {
    j["p_prime0_over_delta"] = (adj.flux[1] - adj.flux[0]) / spacing / pb.delta;
  }
  return j;
}

json report_to_json(const SignReport& r) {
  json j;
  j["quantity"] = r.quantity;
  j["clean"] = r.clean();
  j["violation_count"] = r.violations.size();
  if (r.t0) j["t0"] = *r.t0;
  if (r.t1) j["t1"] = *r.t1;
  if (r.t2) j["t2"] = *r.t2;
  json vs = json::array();
  for (size_t i = 0; i < r.violations.size() && i < 20; ++i) {
    vs.push_back({{"location", r.violations[i].location},
                  {"magnitude", r.violations[i].magnitude},
                  {"what", r.violations[i].what}});
  }
  j["violations"] = vs;
  return j;
}

struct Pipeline {
  json record;
  std::vector<std::string> violations;
  bool solver_failure = false;
};

BeamProblem problem_from_config(const ExperimentConfig& c) {
  BeamProblem pb;
  pb.delta = c.delta;
  pb.clamp_angle = c.clamp_angle;
  pb.a = c.a;
  pb.b = c.b;
  pb.constraints = c.constraints;
  return pb;
}

NewtonOptions newton_from_config(const ExperimentConfig& c) {
  NewtonOptions opt;
  opt.tolerance = c.newton_tolerance;
  opt.max_iterations = c.newton_max_iterations;
  return opt;
}

void run_solve_state(const ExperimentConfig& c, Pipeline& pl) {
  BeamProblem pb = problem_from_config(c);
  pb.material = Material::homogeneous(c.b);
  const FeFunction coarse_init =
      named_state_initialization(UniformGrid(c.level_coarse), c.init);
  const MultilevelResult ml = multilevel_solve(pb, c.level_coarse, c.level_fine, &coarse_init,
                                               newton_from_config(c));
  const StateSolution& sol = ml.solution;
  const AdjointSolution adj = adjoint_solve(sol, pb);
  const UniformGrid& grid = sol.phase.grid();

  pl.record["state"] = state_to_json(sol);
  pl.record["state"]["iterations_per_level"] = ml.iterations_per_level;
  pl.record["state"]["first_unconverged_level"] = ml.first_unconverged_level;
  pl.record["adjoint"] = adjoint_to_json(adj, pb, grid.spacing());
  pl.record["data"] = build_data(sol, derived_phase_field(grid, pb), adj, pb);

  if (!sol.converged) {
    pl.violations.push_back("state solve did not converge (residual " +
                            format_g17(sol.final_residual_norm) + ")");
    pl.solver_failure = true;
  } else if (pb.constraints.empty() && !sol.shear.empty()) {
    const double bound = 10.0 * grid.spacing() * std::max(pb.delta, 1e-300);
    if (std::abs(sol.shear.back()) > bound && pb.delta > 0.0) {
      pl.violations.push_back("free-end shear violates the natural boundary condition");
    }
  }
}

DesignResult run_design(const ExperimentConfig& c, Pipeline& pl) {
  BeamProblem pb = problem_from_config(c);
  DesignParams params{c.c_l, c.c_p, c.epsilon};
  const UniformGrid grid(c.level_fine);
  const FeFunction v0 = named_phase_field_initialization(grid, c.init, c.seed);

  BfgsOptions opt;
  opt.grad_tolerance_rel = c.bfgs_grad_tolerance;
  opt.max_iterations = c.bfgs_max_iterations;
  opt.newton = newton_from_config(c);
  opt.coarse_level = c.level_coarse;
  opt.state_init = c.state_init;

  DesignResult res = bfgs_optimize(v0, params, pb, opt);

  BeamProblem pb_final = pb;
  pb_final.material = Material::from_phase_field(res.phase_field, pb.a, pb.b);
  const ComplianceParts parts = compliance(res.state.phase, res.phase_field, params, pb_final);

  json design;
  design["converged"] = res.converged;
  design["line_search_failed"] = res.line_search_failed;
  design["iterations"] = res.iterations;
  design["cost_history"] = res.cost_history;
  design["gradient_norm_history"] = res.gradient_norm_history;
  design["interfaces"] = res.interfaces;
  design["ordered"] = res.ordered;
  design["t_star"] = res.t_star;
  design["lambda"] = res.optimality.lambda;
  design["optimality_violation_count"] = res.optimality.violation_count();
  design["optimality_max_violation_outside_band"] =
      res.optimality.max_violation_outside(res.interfaces, 4.0 * c.epsilon);
  pl.record["design"] = design;
  pl.record["compliance"] = {{"load", parts.load},
                             {"length", parts.length},
                             {"perimeter", parts.perimeter},
                             {"total", parts.total()}};
  pl.record["state"] = state_to_json(res.state);
  pl.record["adjoint"] = adjoint_to_json(res.adjoint, pb_final, grid.spacing());
  pl.record["data"] = build_data(res.state, res.phase_field, res.adjoint, pb_final);

  if (!res.converged) {
    pl.violations.push_back(res.line_search_failed
                                ? "design optimization stopped: line search failed"
                                : "design optimization did not converge");
    pl.solver_failure = true;
  }
  return res;
}

void run_verify(const ExperimentConfig& c, Pipeline& pl) {
  const DesignResult res = run_design(c, pl);
  const UniformGrid& grid = res.state.phase.grid();
  const double h = grid.spacing();
  json ver;

  if (!res.ordered) pl.violations.push_back("optimal design is not ordered (hard-then-soft)");
  if (res.interfaces.size() != 1)
    pl.violations.push_back("expected exactly one interface, found " +
                            std::to_string(res.interfaces.size()));
  ver["ordered"] = res.ordered;
  ver["t_star"] = res.t_star;

  const double lambda = res.optimality.lambda;
  const double opt_violation = res.optimality.max_violation_outside(res.interfaces, 4.0 * c.epsilon);
  ver["optimality_max_violation_outside_band"] = opt_violation;
  if (opt_violation > 0.0) {
    pl.violations.push_back("optimality condition violated outside interface bands by " +
                            format_g17(opt_violation) + " (lambda = " + format_g17(lambda) + ")");
  }

  if (c.clamp_angle == 0.0) {
    const SignReport mono = verify_monotone_range(res.state.phase, 0.0);
    ver["monotone_range"] = report_to_json(mono);
    if (!mono.clean())
      pl.violations.push_back("monotone-range check failed with " +
                              std::to_string(mono.violations.size()) + " violations");

    const SignReport shear =
        verify_shear_structure(res.state.shear, h, 10.0 * h * std::max(c.delta, 1e-300));
    ver["shear_structure"] = report_to_json(shear);
    if (!shear.clean())
      pl.violations.push_back("shear-structure check failed with " +
                              std::to_string(shear.violations.size()) + " violations");

    BeamProblem pb_final = problem_from_config(c);
    pb_final.material = Material::from_phase_field(res.phase_field, c.a, c.b);
    const AuxiliaryFields aux = compute_auxiliary(res.state.phase, res.adjoint.adjoint, pb_final);
    const SignReport q_report = verify_Q_single_crossing(aux, grid);
    ver["Q_single_crossing"] = report_to_json(q_report);
    if (!q_report.clean())
      pl.violations.push_back("Q single-crossing check failed");

    const SignReport kp = verify_kp_structure(res.state.shear, res.adjoint.flux, h);
    ver["kp_structure"] = report_to_json(kp);
    if (!kp.clean()) pl.violations.push_back("kp sign-structure check failed");
    if (kp.t2 && res.interfaces.size() == 1 && !(res.t_star < *kp.t2))
      pl.violations.push_back("interface t* does not precede the kp sign change t2");

    // Boundary values of the adjoint flux.
    const bool p0_negative = !res.adjoint.flux.empty() && res.adjoint.flux.front() < 0.0;
    const bool p1_small = !res.adjoint.flux.empty() &&
                          std::abs(res.adjoint.flux.back()) <= 10.0 * h * std::max(c.delta, 1.0);
    ver["adjoint_p0_negative"] = p0_negative;
    ver["adjoint_p1_natural"] = p1_small;
    if (!p0_negative) pl.violations.push_back("adjoint flux p(0) is not negative");
    if (!p1_small) pl.violations.push_back("adjoint flux p(1) violates the natural condition");
  }

  pl.record["verification"] = ver;
}

void run_homogenize(const ExperimentConfig& c, Pipeline& pl) {
  BeamProblem pb = problem_from_config(c);
  const UniformGrid grid(c.level_fine);
  const FeFunction theta_fe = FeFunction::constant(grid, c.theta);
  const HomogenizationTable table =
      homogenization_experiment(theta_fe, c.periods, pb, c.level_coarse, c.level_fine);

  json rows = json::array();
  bool all_converged = true;
  for (const auto& row : table.rows) {
    rows.push_back({{"periods", row.periods},
                    {"error_harmonic", row.error_harmonic},
                    {"error_arithmetic", row.error_arithmetic},
                    {"converged", row.converged}});
    all_converged = all_converged && row.converged;
  }
  pl.record["homogenization"] = {{"rows", rows},
                                 {"monotone_decreasing", table.monotone_decreasing}};

  BeamProblem harmonic = pb;
  harmonic.material = Material::from_volume_fraction(theta_fe, pb.a, pb.b);
  StateSolution ref = newton_solve(table.reference_phase, harmonic, newton_from_config(c));
  const AdjointSolution adj = adjoint_solve(ref, harmonic);
  pl.record["state"] = state_to_json(ref);
  pl.record["adjoint"] = adjoint_to_json(adj, harmonic, grid.spacing());
  pl.record["data"] = build_data(ref, derived_phase_field(grid, harmonic), adj, harmonic);

  if (!all_converged) {
    pl.violations.push_back("a laminate state solve did not converge");
    pl.solver_failure = true;
  }
  if (!table.monotone_decreasing)
    pl.violations.push_back("laminate errors do not decrease monotonically");
}

}  // namespace

std::string render_csv(const nlohmann::json& record) {
  if (!record.contains("data")) throw ConfigError("record missing field 'data'");
  const json& data = record["data"];
  static const std::vector<std::string> columns = {"t", "K", "v", "theta", "k", "P", "p"};
  for (const auto& col : columns)
    if (!data.contains(col)) throw ConfigError("record missing field 'data." + col + "'");
  const size_t rows = data["t"].size();
  std::string out = "t,K,v,theta,k,P,p\n";
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ",";
      out += format_g17(data[columns[c]][r].get<double>());
    }
    out += "\n";
  }
  return out;
}

CsvTable read_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open CSV file '" + file.string() + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty CSV file");
  std::stringstream header(line);
  std::string col;
  while (std::getline(header, col, ',')) table.columns.push_back(trim(col));
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.push_back(parse_double("csv", field));
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

std::string fmt(double x, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, x);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;      // world
  double px, py, pw, ph;      // pixel viewport
  double X(double x) const { return px + (x - x0) / (x1 - x0) * pw; }
  double Y(double y) const { return py + ph - (y - y0) / (y1 - y0) * ph; }
};

void append_axes(std::string& svg, const Frame& f, const std::string& title) {
  svg += "<rect x='" + fmt(f.px) + "' y='" + fmt(f.py) + "' width='" + fmt(f.pw) +
         "' height='" + fmt(f.ph) + "' fill='none' stroke='#444444' stroke-width='1'/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double wx = f.x0 + i * (f.x1 - f.x0) / 4.0;
    const double wy = f.y0 + i * (f.y1 - f.y0) / 4.0;
    const double sx = f.X(wx);
    const double sy = f.Y(wy);
    svg += "<line x1='" + fmt(sx) + "' y1='" + fmt(f.py + f.ph) + "' x2='" + fmt(sx) + "' y2='" +
           fmt(f.py + f.ph + 5) + "' stroke='#444444'/>\n";
    svg += "<text x='" + fmt(sx) + "' y='" + fmt(f.py + f.ph + 18) +
           "' font-size='11' text-anchor='middle' font-family='sans-serif'>" + fmt(wx, "%.4g") +
           "</text>\n";
    svg += "<line x1='" + fmt(f.px - 5) + "' y1='" + fmt(sy) + "' x2='" + fmt(f.px) + "' y2='" +
           fmt(sy) + "' stroke='#444444'/>\n";
    svg += "<text x='" + fmt(f.px - 8) + "' y='" + fmt(sy + 4) +
           "' font-size='11' text-anchor='end' font-family='sans-serif'>" + fmt(wy, "%.4g") +
           "</text>\n";
  }
  svg += "<text x='" + fmt(f.px + f.pw / 2) + "' y='" + fmt(f.py - 8) +
         "' font-size='13' text-anchor='middle' font-family='sans-serif'>" + title + "</text>\n";
}

// Diverging two-color map over [-1.2, 1.2]: soft phase blue, hard phase red.
std::string color_of_v(double v) {
  const double lo = -1.2, hi = 1.2;
  double s = (std::clamp(v, lo, hi) - lo) / (hi - lo);
  const int blue[3] = {33, 102, 172};
  const int mid[3] = {240, 240, 240};
  const int red[3] = {178, 24, 43};
  int rgb[3];
  for (int i = 0; i < 3; ++i) {
    rgb[i] = s < 0.5 ? static_cast<int>(std::lround(blue[i] + (mid[i] - blue[i]) * (s / 0.5)))
                     : static_cast<int>(std::lround(mid[i] + (red[i] - mid[i]) * ((s - 0.5) / 0.5)));
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02X%02X%02X", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::vector<double> fetch_series(const json& record, const std::string& name) {
  if (!record.contains("data") || !record["data"].contains(name))
    throw ConfigError("record missing field 'data." + name + "'");
  return record["data"][name].get<std::vector<double>>();
}

}  // namespace

std::string render_plot_svg(const nlohmann::json& record, const std::string& kind) {
  std::string svg;
  if (kind == "curve") {
    const std::vector<double> x = fetch_series(record, "curve_x");
    const std::vector<double> y = fetch_series(record, "curve_y");
    const std::vector<double> v = fetch_series(record, "v");
    if (x.size() != y.size() || x.size() != v.size() || x.empty())
      throw ConfigError("record field 'data.curve_x/curve_y/v' lengths disagree");
    const Frame f{-1.1, 1.1, -1.1, 1.1, 55, 30, 540, 540};
    svg += "<svg xmlns='http://www.w3.org/2000/svg' width='660' height='620'>\n";
    svg += "<rect width='660' height='620' fill='#FFFFFF'/>\n";
    append_axes(svg, f, "beam curve, colored by phase field");
    for (size_t i = 0; i + 1 < x.size(); ++i) {
      const std::string color = color_of_v(0.5 * (v[i] + v[i + 1]));
      svg += "<line x1='" + fmt(f.X(x[i])) + "' y1='" + fmt(f.Y(y[i])) + "' x2='" +
             fmt(f.X(x[i + 1])) + "' y2='" + fmt(f.Y(y[i + 1])) + "' stroke='" + color +
             "' stroke-width='3' stroke-linecap='round'/>\n";
    }
    svg += "</svg>\n";
    return svg;
  }

  std::string series;
  double y0 = 0.0, y1 = 0.0;
  std::string title;
  if (kind == "K") {
    series = "K";
    title = "phase K(t)";
  } else if (kind == "v") {
    series = "v";
    title = "phase field v(t)";
    y0 = -1.2;
    y1 = 1.2;
  } else {
    throw ConfigError("unknown plot kind '" + kind + "' (expected curve, K, or v)");
  }

  const std::vector<double> t = fetch_series(record, "t");
  const std::vector<double> y = fetch_series(record, series);
  if (t.size() != y.size() || t.empty())
    throw ConfigError("record field 'data." + series + "' length disagrees with 'data.t'");
  if (kind == "K") {
    y0 = *std::min_element(y.begin(), y.end());
    y1 = *std::max_element(y.begin(), y.end());
    const double pad = std::max(0.05 * (y1 - y0), 1e-6);
    y0 -= pad;
    y1 += pad;
  }
  const Frame f{0.0, 1.0, y0, y1, 65, 30, 620, 420};
  svg += "<svg xmlns='http://www.w3.org/2000/svg' width='720' height='500'>\n";
  svg += "<rect width='720' height='500' fill='#FFFFFF'/>\n";
  append_axes(svg, f, title);
  svg += "<polyline fill='none' stroke='#1F77B4' stroke-width='2' points='";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) svg += " ";
    svg += fmt(f.X(t[i])) + "," + fmt(f.Y(y[i]));
  }
  svg += "'/>\n</svg>\n";
  return svg;
}

RunArtifact run_experiment(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  resolve_config(c);

  Pipeline pl;
  pl.record["command"] = c.command;
  pl.record["config"] = config_to_json(c);

  try {
    if (c.command == "solve-state") {
      run_solve_state(c, pl);
    } else if (c.command == "optimize-design") {
      run_design(c, pl);
    } else if (c.command == "verify") {
      run_verify(c, pl);
    } else if (c.command == "homogenize") {
      run_homogenize(c, pl);
    } else {
      throw ConfigError("command '" + c.command + "' is not runnable directly");
    }
  } catch (const std::exception& e) {
    pl.record["error"] = e.what();
    pl.violations.push_back(std::string("pipeline error: ") + e.what());
    pl.solver_failure = true;
  }

  RunArtifact artifact;
  artifact.exit_status = pl.solver_failure ? 1 : (pl.violations.empty() ? 0 : 2);
  pl.record["violations"] = pl.violations;
  pl.record["exit_status"] = artifact.exit_status;
  artifact.record = pl.record;
  artifact.directory = c.out_dir;

  std::filesystem::create_directories(artifact.directory);
  auto write_file = [&](const std::string& name, const std::string& content) {
    std::ofstream out(artifact.directory / name, std::ios::binary);
    out << content;
  };
  write_file("config.txt", config_to_text(c));
  write_file("record.json", artifact.record.dump(2) + "\n");
  if (artifact.record.contains("data")) {
    write_file("solution.csv", render_csv(artifact.record));
    write_file("curve.svg", render_plot_svg(artifact.record, "curve"));
    write_file("K.svg", render_plot_svg(artifact.record, "K"));
    write_file("v.svg", render_plot_svg(artifact.record, "v"));
  }
  return artifact;
}

}  // namespace elastica
