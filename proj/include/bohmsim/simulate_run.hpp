#pragma once

#include <iosfwd>

#include "bohmsim/run_config.hpp"

namespace bohmsim {

// process exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;
inline constexpr int kExitStatsRefusal = 4;

/// Runs selfcheck -> sample -> integrate -> stats -> emit and writes
/// trajectories, density table, figure and manifest into cfg.out_dir.
/// Diagnostics go to err; data only to files and out.
int run_simulation(const RunConfig &cfg, bool selfcheck_only, std::ostream &out,
                   std::ostream &err);

}  // namespace bohmsim
