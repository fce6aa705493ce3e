#pragma once

#include <string>
#include <vector>

#include "elastica/run.hpp"

namespace elastica {

/// Parsed command line: one resolved config per run (sweep yields one per
/// --config file). Throws ConfigError on bad input.
struct CliInvocation {
  std::vector<ExperimentConfig> runs;
  int workers = 1;
};

CliInvocation parse_cli(const std::vector<std::string>& args);

/// Full CLI entry point: parse, run (concurrently for sweep), print one
/// summary line per run, return the worst exit status.
int cli_main(int argc, char** argv);

}  // namespace elastica
