#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "elastica/design.hpp"
#include "elastica/homogenization.hpp"
#include "elastica/verification.hpp"

namespace elastica {

/// Fully resolved experiment description. Defaults reproduce the reference
/// two-material setup: b = 1, a = 0.5, delta = 100, c_l = c_p = 1, N = 513,
/// eps = 1/(N-1).
struct ExperimentConfig {
  std::string command = "solve-state";
  int level_coarse = 3;
  int level_fine = 0;        // 0 = unset; resolves to 9 (11 for homogenize)
  double delta = 100.0;
  double clamp_angle = 0.0;  // K0
  double a = 0.5;
  double b = 1.0;
  double c_l = 1.0;
  double c_p = 1.0;
  double epsilon = -1.0;     // < 0 = unset; resolves to the fine-grid spacing
  std::string init;          // empty = per-command default
  std::string state_init = "zero";
  std::vector<PointConstraint> constraints;
  std::string out_dir = "out";
  unsigned seed = 0;
  double theta = 0.5;                     // homogenize
  std::vector<int> periods = {8, 32, 128};  // homogenize
  int workers = 4;                        // sweep
  double newton_tolerance = 1e-10;
  int newton_max_iterations = 50;
  double bfgs_grad_tolerance = 1e-6;
  int bfgs_max_iterations = 1000;

  int num_nodes() const { return (1 << level_fine) + 1; }
};

/// Applies one key = value pair; throws ConfigError naming unknown keys or
/// unparsable values.
void apply_config_key(ExperimentConfig& config, const std::string& key,
                      const std::string& value);

/// Plain-text key = value file ('#' comments); values land on top of config.
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& file);

/// Fills dependent defaults (level_fine, epsilon, init) and validates ranges;
/// throws ConfigError naming the offending key.
void resolve_config(ExperimentConfig& config);

/// "(t, x, y[, weight]); ..." -> constraint list.
std::vector<PointConstraint> parse_constraints(const std::string& text);

/// Resolved config echo, one sorted "key = value" line each; written into the
/// output directory of every run and parseable by apply_config_file.
std::string config_to_text(const ExperimentConfig& config);
nlohmann::json config_to_json(const ExperimentConfig& config);

struct RunArtifact {
  nlohmann::json record;
  int exit_status = 0;
  std::filesystem::path directory;
};

/// Dispatches to the module pipelines, writes config.txt, record.json,
/// solution.csv and the SVG plots into the output directory. Pipeline errors
/// are recorded (never thrown) and reflected in the exit status:
/// 0 = clean, 1 = solver failure/error, 2 = verification violations.
RunArtifact run_experiment(const ExperimentConfig& config);

/// Deterministic SVG renderings from a run record; kind is one of
/// "curve" (gamma colored by the phase field), "K", "v". Missing record
/// fields raise ConfigError naming the field.
std::string render_plot_svg(const nlohmann::json& record, const std::string& kind);

/// Fixed-order CSV of the nodal data (t, K, v, theta, k, P, p) at full double
/// precision.
std::string render_csv(const nlohmann::json& record);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::filesystem::path& file);

}  // namespace elastica
