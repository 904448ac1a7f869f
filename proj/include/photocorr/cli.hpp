#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "photocorr/config.hpp"
#include "photocorr/estimate.hpp"

namespace photocorr {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitIo = 2, kExitEstimation = 3 };

/// Stream file for an output prefix: the prefix itself when it already ends
/// in .csv or .bin, otherwise prefix + the format's extension.
std::filesystem::path stream_output_path(const ExperimentConfig& config);

/// Simulates the configured run and writes the stream and its sidecar.
std::filesystem::path run_simulate(const ExperimentConfig& config);

struct AnalyzeOutput {
  std::filesystem::path report_path;     // <out>.report.json
  std::filesystem::path histogram_path;  // <out>.hist.csv (pulsed) or <out>.curve.csv
  std::optional<CoherenceReport> report; // pulsed streams only
  std::optional<StationaryCurve> curve;  // stationary streams only
};

/// Analyzes a stream file. `mode_override` takes precedence over the mode in
/// the stream metadata; otherwise `config.mode` is used when the stream has
/// none. Warnings go to `warn`.
AnalyzeOutput run_analyze(const std::filesystem::path& stream_path, const ExperimentConfig& config,
                          bool mode_override, std::ostream& warn);

/// Writes `<out>.fig<id>.csv`.
std::filesystem::path run_figure(int id, const ExperimentConfig& config);

/// Full command line entry point; returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace photocorr
