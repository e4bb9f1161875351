#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hstumor/config.hpp"
#include "hstumor/evolution.hpp"

namespace hst {

inline constexpr const char* kOutputDirEnv = "HSTUMOR_OUTPUT_DIR";

// Scientific notation with 17 significant digits, used in every CSV.
std::string format_double(double v);

// Least-squares slope of log(err) against log(h); nullopt with fewer than two usable rows.
std::optional<double> fitted_order(std::span<const double> h, std::span<const double> err);

struct RunOutcome {
  int exit_code = 0;  // 0 success, 2 runtime failure
  std::filesystem::path dir;
  Trajectory trajectory;
  std::string error;
  double r0_error = -1.0;  // negative when not applicable
  double r1_error = -1.0;
  int steps = 0;
};

// Output directory: the override (usually the environment variable) when given, else the
// config's output key relative to the config file, else "<config stem>_out" there.
std::filesystem::path resolve_output(const RunConfig& cfg, const std::string& stem,
                                     const std::optional<std::string>& override_dir);

// Runs one scenario and writes trajectory.csv, radii.csv and meta.json into dir.
// Convergence studies also write table.csv. meta.json is written even on failure.
RunOutcome run(const RunConfig& cfg, const std::filesystem::path& dir);

// Exact radii only; no field solve.
RunOutcome run_oracle(const RunConfig& cfg, const std::filesystem::path& dir);

struct TableRow {
  int cells_x = 0, cells_y = 0;
  double dt = 0.0;
  int steps = 0;
  double r0_numerical = -1.0, r1_numerical = -1.0;
  double r0_error = -1.0, r1_error = -1.0;
  bool completed = true;
};

// Rows in the given order; each row writes its own run outputs into dir/I<I>_J<J>.
// Errors are final-time for single-boundary runs and discrete L2 in time otherwise.
std::vector<TableRow> convergence_table(std::span<const RunConfig> rows, const std::filesystem::path& dir);
void write_table(const std::vector<TableRow>& rows, const std::filesystem::path& file);

}  // namespace hst
