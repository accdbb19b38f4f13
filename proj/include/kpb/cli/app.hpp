#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace kpb::cli {

enum ExitCode : int { Ok = 0, Failure = 1, Invalid = 2, BlowUp = 3 };

/// A named output file held in memory until the run has finished.
struct Artifact {
    std::string name;
    std::string content;
};

/// Command-line entry point of the `kpb` tool: parses flags and an optional INI
/// config (flags win), validates, runs the selected experiment and writes its
/// artifacts plus `manifest.ini`. Nothing is written unless the run succeeds.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// $KPB_OUTPUT_ROOT if set and non-empty, else `kpb-output`.
std::filesystem::path default_output_root();

/// "16,32,64" -> {16, 32, 64}. Throws std::invalid_argument on malformed entries.
std::vector<double> parse_list(const std::string& text);

/// "128x64" -> {128, 64}. Throws std::invalid_argument unless both sizes are >= 4.
std::pair<std::size_t, std::size_t> parse_grid(const std::string& text);

/// Creates `dir` if needed and probes it with a temporary file.
/// Throws std::runtime_error if it cannot be written.
void check_writable(const std::filesystem::path& dir);

/// Writes each artifact through a temporary name and renames it into place.
void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts);

/// 17 significant digits.
std::string format_double(double x);

}  // namespace kpb::cli
