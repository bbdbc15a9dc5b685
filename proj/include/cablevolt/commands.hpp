#pragma once

#include <vector>

#include "cablevolt/result_table.hpp"
#include "cablevolt/study_config.hpp"

namespace cablevolt {

struct RunOptions {
    bool allow_infeasible = false;
    int profile_segments = 0;  ///< 0: no internal profile table
    Execution exec = Execution::Parallel;
};

/// Flow at one operating point; with a profile, a second table of N+1 nodes.
/// Throws ZeroFarmPower when the farm injects no power, unless infeasible
/// rows are allowed.
std::vector<ResultTable> cmd_analyze(const StudyConfig& config, double v2, double alpha, double beta_deg,
                                     const RunOptions& options);

/// Constrained optimum for one production level. Throws Infeasible unless
/// infeasible rows are allowed.
std::vector<ResultTable> cmd_optimize(const StudyConfig& config, double p_farm_mw, const RunOptions& options);

/// Efficiency against production for every (length, policy). Infeasible
/// rows are dropped unless allowed, in which case they carry the values
/// obtained without the current limit (or NaN) and feasible = 0.
std::vector<ResultTable> cmd_sweep(const StudyConfig& config, const RunOptions& options);

/// One row per (rated power, strategy) with the loss reduction against the
/// first strategy.
std::vector<ResultTable> cmd_annual(const StudyConfig& config, const RunOptions& options);

/// Transfer capability per (length, v2) plus the envelope over v2.
std::vector<ResultTable> cmd_envelope(const StudyConfig& config, const RunOptions& options);

/// Adds the config hash, tool version and command name to every table.
void stamp_provenance(std::vector<ResultTable>& tables, const StudyConfig& config, const std::string& command);

}  // namespace cablevolt
