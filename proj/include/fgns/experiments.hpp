#pragma once

#include <string>
#include <vector>

#include "fgns/config.hpp"

namespace fgns {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitInvariant = 3, kExitNonConvergence = 4 };

const std::vector<std::string>& subcommand_names();

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::string> artifacts;  // file names inside cfg.out
};

// Runs one subcommand and writes its CSVs, snapshots and manifest.json into
// cfg.out. Errors are mapped to exit codes, never thrown; on failure the
// manifest is still written and flagged partial.
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& subcommand);

}  // namespace fgns
