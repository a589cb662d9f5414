#pragma once

#include <filesystem>

#include <json.hpp>

#include "ddlab/scenario.hpp"

namespace ddlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconsistent = 2;

struct RunResult {
  int exit_code = kExitOk;
  nlohmann::json report;
};

/// Runs `scenario.experiment` and writes report.json plus CSV tables and plot
/// data into `out_dir`. Errors inside the experiment propagate as LabError.
RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

/// One row per sweep value (classification plus, for compact rows, the top
/// eigenvalue error). Row failures are recorded in the row.
RunResult run_sweep(const Scenario& scenario, const std::filesystem::path& out_dir);

/// Two-column whitespace-separated files, one per curve found in `report`.
void emit_plot_data(const nlohmann::json& report, const std::filesystem::path& out_dir);

}  // namespace ddlab
