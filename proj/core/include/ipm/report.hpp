#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ipm/config.hpp"
#include "ipm/experiments.hpp"
#include "ipm/transport.hpp"

namespace ipm {

/// Shortest round-trip decimal form used in every CSV cell.
std::string csv_number(double v);

/// Writes text to path. Throws IoError if the file exists and overwrite is
/// false, or on failure.
void write_text(const std::filesystem::path& path, const std::string& text, bool overwrite);

/// Creates dir (and parents). Throws IoError on failure.
void ensure_directory(const std::filesystem::path& dir);

std::string diagnostics_csv(const std::vector<StepDiagnostics>& diag);

/// constants.csv, prop3.csv, prop3_geometry.csv, diagnostics.csv and
/// prop3_summary.csv under dir. Returns the written paths.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& dir, bool overwrite);

/// manifest.txt: version tag, command, then the full config echo.
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const RunConfig& cfg, bool overwrite);

/// Version tag of the library.
const char* version();

}  // namespace ipm
