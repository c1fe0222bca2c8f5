#pragma once

#include <ostream>
#include <string>

#include "run_config.hpp"

namespace cavity::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsageError = 2 };

/// Writes gamma_vs_delta.csv and gamma_vs_tau.csv into config.out_dir.
int cmd_gamma_sweep(const RunConfig& config, std::ostream& log);
/// Writes cluster_report.txt and, with snapshot, cluster_state.csv.
int cmd_cluster(const RunConfig& config, std::ostream& log);
/// Writes oracle_report.csv.
int cmd_oracle_verify(const RunConfig& config, std::ostream& log);
/// Runs config.pattern; writes mbqc_report.txt.
int cmd_mbqc(const RunConfig& config, std::ostream& log);

/// Runs one subcommand by name, mapping library and configuration errors to
/// exit codes (messages go to `err`).
int dispatch(const std::string& command, const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace cavity::cli
