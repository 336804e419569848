#pragma once

#include <ostream>
#include <string>

#include "circlt/config.hpp"

namespace circlt {

// CI-facing exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitStatFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

struct RunOptions {
    bool no_header = false;  // suppress the timestamped header line
};

/// Execute one subcommand (simulate | covariance | moments | counts |
/// limit | tightness | verify) against a config. Artifacts land in
/// cfg.out_dir; progress goes to `log`. Returns an exit code.
int run_subcommand(const std::string& name, const ExperimentConfig& cfg, const RunOptions& opts,
                   std::ostream& log);

}  // namespace circlt
