#include "elastica/cli.hpp"

#include <atomic>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "elastica/errors.hpp"

namespace elastica {

namespace {

// Raw flag holders plus the CLI11 options, so file values are only
// overridden by flags the user actually passed.
struct FlagSet {
  int level_coarse = 0, level_fine = 0, workers = 0;
  unsigned seed = 0;
  double delta = 0, clamp = 0, a = 0, b = 0, c_l = 0, c_p = 0, eps = 0, theta = 0;
  std::string init, state_init, constraints, out, periods;
  std::vector<std::string> configs;

  CLI::App* cmd = nullptr;

  void attach(CLI::App* app) {
    cmd = app;
    app->add_option("--config", configs, "config file(s), key = value lines");
    app->add_option("--level-coarse", level_coarse, "coarse grid level");
    app->add_option("--level-fine", level_fine, "fine grid level (N = 2^l + 1)");
    app->add_option("--delta", delta, "force magnitude (f = -delta e2)");
    app->add_option("--K0", clamp, "clamp angle in radians");
    app->add_option("--a", a, "soft material stiffness");
    app->add_option("--b", b, "hard material stiffness");
    app->add_option("--cl", c_l, "length cost weight");
    app->add_option("--cp", c_p, "perimeter weight");
    app->add_option("--eps", eps, "diffuse interface width");
    app->add_option("--init", init, "initialization name");
    app->add_option("--state-init", state_init, "state branch initialization");
    app->add_option("--constraints", constraints, "point constraints '(t,x,y[,w]); ...'");
    app->add_option("--out", out, "output directory");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--theta", theta, "volume fraction (homogenize)");
    app->add_option("--periods", periods, "laminate period counts, e.g. 8,32,128");
    app->add_option("--workers", workers, "concurrent runs (sweep)");
  }

  bool passed(const std::string& name) const { return cmd->count(name) > 0; }

  void overlay(ExperimentConfig& c) const {
    if (passed("--level-coarse")) c.level_coarse = level_coarse;
    if (passed("--level-fine")) c.level_fine = level_fine;
    if (passed("--delta")) c.delta = delta;
    if (passed("--K0")) c.clamp_angle = clamp;
    if (passed("--a")) c.a = a;
    if (passed("--b")) c.b = b;
    if (passed("--cl")) c.c_l = c_l;
    if (passed("--cp")) c.c_p = c_p;
    if (passed("--eps")) c.epsilon = eps;
    if (passed("--init")) c.init = init;
    if (passed("--state-init")) c.state_init = state_init;
    if (passed("--constraints")) c.constraints = parse_constraints(constraints);
    if (passed("--out")) c.out_dir = out;
    if (passed("--seed")) c.seed = seed;
    if (passed("--theta")) c.theta = theta;
    if (passed("--periods")) apply_config_key(c, "periods", periods);
    if (passed("--workers")) c.workers = workers;
  }
};

}  // namespace

CliInvocation parse_cli(const std::vector<std::string>& args) {
  CLI::App app{"clamped nonlinear beam: state solves, optimal two-material design, "
               "homogenization and structure verification"};
  app.require_subcommand(1);

  static const std::vector<std::string> commands = {"solve-state", "optimize-design",
                                                    "homogenize", "verify", "sweep"};
  std::vector<FlagSet> flags(commands.size());
  std::vector<CLI::App*> sub(commands.size());
  for (size_t i = 0; i < commands.size(); ++i) {
    sub[i] = app.add_subcommand(commands[i]);
    flags[i].attach(sub[i]);
  }

  // CLI11 wants mutable argv-style input in reverse order.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help: surface the message as output, not an error.
      std::ostringstream help;
      help << app.help();
      throw ConfigError(help.str());
    }
    throw ConfigError(std::string("command line: ") + e.what());
  }

  size_t chosen = 0;
  for (size_t i = 0; i < commands.size(); ++i)
    if (sub[i]->parsed()) chosen = i;
  const FlagSet& f = flags[chosen];
  const std::string command = commands[chosen];

  CliInvocation invocation;
  if (command == "sweep") {
    if (f.configs.empty())
      throw ConfigError("sweep requires at least one --config file");
    for (const std::string& file : f.configs) {
      ExperimentConfig c;
      apply_config_file(c, file);
      if (c.command == "sweep" || c.command.empty())
        throw ConfigError("sweep config '" + file + "' must set a runnable command");
      f.overlay(c);
      const std::string stem = std::filesystem::path(file).stem().string();
      c.out_dir = (std::filesystem::path(f.passed("--out") ? f.out : c.out_dir) / stem).string();
      resolve_config(c);
      invocation.runs.push_back(std::move(c));
    }
    invocation.workers = f.passed("--workers") ? f.workers : invocation.runs.front().workers;
    if (invocation.workers < 1) throw ConfigError("workers must be >= 1");
  } else {
    ExperimentConfig c;
    c.command = command;
    for (const std::string& file : f.configs) apply_config_file(c, file);
    c.command = command;  // the subcommand wins over any file value
    f.overlay(c);
    resolve_config(c);
    invocation.runs.push_back(std::move(c));
    invocation.workers = 1;
  }
  return invocation;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  CliInvocation invocation;
  try {
    invocation = parse_cli(args);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  std::atomic<int> next{0};
  std::atomic<int> worst{0};
  std::mutex io_mutex;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= static_cast<int>(invocation.runs.size())) return;
      const ExperimentConfig& cfg = invocation.runs[i];
      RunArtifact artifact = run_experiment(cfg);
      int prev = worst.load();
      while (prev < artifact.exit_status && !worst.compare_exchange_weak(prev, artifact.exit_status)) {
      }
      std::lock_guard<std::mutex> lock(io_mutex);
      std::cout << cfg.command << " -> " << artifact.directory.string() << " (exit "
                << artifact.exit_status << ")";
      for (const auto& v : artifact.record["violations"])
        std::cout << "\n  violation: " << v.get<std::string>();
      std::cout << "\n";
    }
  };

  const int n_workers =
      std::min<int>(invocation.workers, static_cast<int>(invocation.runs.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return worst.load();
}

}  // namespace elastica
