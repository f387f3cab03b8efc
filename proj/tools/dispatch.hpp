#pragma once

#include <filesystem>
#include <iosfwd>

#include "kickwig/config.hpp"

namespace kickwig::cli {

enum ExitCode : int { ok = 0, error = 1, verdict_failed = 2 };

/// Output root: config output_dir, else $KW_OUTPUT_DIR, else ./kickwig-out.
std::filesystem::path output_root(const SimConfig& config);

/// Runs the configured scenario and exports its results.
int main_dispatch(const SimConfig& config, std::ostream& out);
/// Writes spectrum and kernel CSVs for the configured K, k̄ and potential.
int dump_coefficients(const SimConfig& config, std::ostream& out);
/// Parses and checks a config, reporting the resolved parameters.
int validate(const SimConfig& config, std::ostream& out);

/// Parses `path` and runs `command` ("run", "dump-coefficients", "validate"),
/// mapping exceptions to exit code 1 with a message on err.
int run_command(const std::string& command, const std::filesystem::path& path, std::ostream& out,
                std::ostream& err);

}  // namespace kickwig::cli
