#pragma once

#include <filesystem>

#include "kvnlab/config.hpp"

namespace kvnlab {

/// Exit codes shared by the library entry points and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitTolerance = 3;

/// Runs one experiment, writes its report directory, and enforces the
/// experiment's built-in closed-form tolerances (kExitTolerance on failure).
/// Validation problems raise ParameterError/DataError; the CLI maps those to
/// kExitValidation.
int run_experiment(const RunConfig& cfg);

/// Emits a golden file (scalar table with per-scalar tolerances + CSV
/// checksums) from an existing report directory.
int write_golden(const std::filesystem::path& report_dir, const std::filesystem::path& out_path,
                 double relative_tolerance = 1e-9);

/// Compares a report directory against a golden file: scalars within their
/// stated tolerances and CSV checksums byte-identical. Returns kExitOk,
/// kExitTolerance on mismatch, kExitValidation on missing/malformed files.
int verify_report(const std::filesystem::path& report_dir,
                  const std::filesystem::path& golden_path);

} // namespace kvnlab
