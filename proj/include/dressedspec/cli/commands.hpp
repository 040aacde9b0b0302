// commands.hpp: the spectrum, dressed and scan commands

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dressedspec/cli/config.hpp"
#include "dressedspec/dressed.hpp"

namespace dressedspec::cli {

// Command-line overrides of the output section.
struct CommandOptions {
    std::optional<std::string> out;
    bool no_plot{false};
    std::optional<std::string> format;  // "csv" or "json" for the spectrum curve
};

struct SpectrumRun {
    RunConfig config;
    Spectrum spectrum;
    PeakSet peaks;
    PeakAssignment assignment;
    std::optional<StrongRegimeReport> regime;  // absent when rabi == 0
    double steady_residual{0.0};
};

struct DressedRun {
    RunConfig config;
    DressedLevels levels;
    TransitionTable table;
    CouplingBlocks blocks;
    CollectiveBasis basis;
    ManifoldReport manifold;
};

// Computation only; nothing is written.
SpectrumRun run_spectrum(const RunConfig& config);
DressedRun run_dressed(const RunConfig& config);

std::vector<std::filesystem::path> write_spectrum_outputs(const SpectrumRun& run,
                                                          const std::filesystem::path& dir,
                                                          const CommandOptions& options);
std::vector<std::filesystem::path> write_dressed_outputs(const DressedRun& run,
                                                         const std::filesystem::path& dir,
                                                         const CommandOptions& options);

struct ScanRow {
    double value{0.0};
    int status{0};      // exit-code class: 0 ok, 1 validation, 2 numerical
    std::string error;  // empty when status == 0
    std::vector<double> sidebands;
    std::size_t peak_count{0};
};

struct ScanResult {
    std::string axis;
    std::vector<ScanRow> rows;  // in input order
};

// Evaluates every value (concurrently), writing each point under
// <dir>/point_<k> and a scan_summary.{json,csv}. Point failures are recorded.
ScanResult run_scan(const RunConfig& config, const std::string& axis, const std::vector<double>& values,
                    const std::filesystem::path& dir, const CommandOptions& options);

// Splits "1, 2,3" into numbers; an empty string gives an empty list.
std::vector<double> parse_value_list(const std::string& text);

// Full command-line entry point. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace dressedspec::cli
