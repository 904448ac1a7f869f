#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "photocorr/click_stream.hpp"
#include "photocorr/modes.hpp"
#include "photocorr/simulate.hpp"
#include "photocorr/states.hpp"

namespace photocorr {

enum class RunKind { pulsed, stationary };
enum class StationarySource { thermal, poisson };

/// Everything needed to reproduce one run: what to simulate, how to analyze
/// it, and where to write results. Zero-valued estimator settings select
/// defaults derived from the mode or bandwidth.
struct ExperimentConfig {
  // [state], [mode]
  std::string state = "coherent:1";
  std::string mode = "gauss:1e-9";
  // [detector]
  DetectorModel detector;
  // [run]
  RunKind run = RunKind::pulsed;
  std::uint64_t pulses = 100000;
  double period = 12.5e-9;
  StationarySource source = StationarySource::thermal;
  double rate = 1e5;
  double bandwidth = 1e6;
  double duration = 0.01;
  double timestep = 0.0;
  Lineshape lineshape = Lineshape::gaussian;
  // [estimator]
  double bin_width = 0.0;
  double max_tau = 0.0;
  bool start_stop = false;
  double sidepeak_window = 0.0;
  std::uint32_t side_peaks = 3;
  // [general]
  std::uint64_t seed = 1;
  unsigned threads = 1;
  // [output]
  std::string out = "photocorr_out";
  StreamFormat format = StreamFormat::csv;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  QuantumState build_state() const;
  TemporalMode build_mode() const;
  PulseTrainConfig build_train() const;
  StationaryThermalConfig build_stationary() const;

  /// Bin width and tau range after applying defaults: width/20 and
  /// min(8 widths, period/2) for pulsed runs; 1/(50 bandwidth) and
  /// 10/bandwidth for stationary runs.
  double effective_bin_width() const;
  double effective_max_tau() const;
  double effective_sidepeak_window() const;

  /// Parses and builds every object once, so errors surface before any work.
  void validate() const;
};

/// Parses the text form. Errors are ConfigError with `<source>:<line>:`.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "config");
ExperimentConfig load_config(const std::filesystem::path& path);
/// Emits every field; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& config);

}  // namespace photocorr
