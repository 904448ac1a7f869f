#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace photocorr {

/// Pulse index used for records of stationary (unpulsed) runs.
inline constexpr std::uint64_t kNoPulse = std::numeric_limits<std::uint64_t>::max();

/// Single-detector model. The defaults are the ideal detector, for which the
/// efficiency acts as a pure prefactor.
struct DetectorModel {
  double efficiency = 1.0;
  double timing_jitter_sigma = 0.0;  // seconds
  double dead_time = 0.0;            // seconds, non-paralyzable

  void validate() const;
  friend bool operator==(const DetectorModel&, const DetectorModel&) = default;
};

struct Click {
  std::uint64_t pulse_index = kNoPulse;
  double time = 0.0;  // seconds

  friend bool operator==(const Click&, const Click&) = default;
};

struct PulsedRunInfo {
  std::uint64_t num_pulses = 0;
  double repetition_period = 0.0;

  friend bool operator==(const PulsedRunInfo&, const PulsedRunInfo&) = default;
};

struct StationaryRunInfo {
  std::string source;  // "thermal" or "poisson"
  double mean_rate = 0.0;
  double bandwidth = 0.0;
  double duration = 0.0;
  double field_timestep = 0.0;
  std::string lineshape;

  friend bool operator==(const StationaryRunInfo&, const StationaryRunInfo&) = default;
};

struct StreamMetadata {
  std::uint64_t seed = 0;
  std::string state_spec;
  std::string mode_spec;
  DetectorModel detector;
  std::optional<PulsedRunInfo> pulsed;
  std::optional<StationaryRunInfo> stationary;

  friend bool operator==(const StreamMetadata&, const StreamMetadata&) = default;
};

/// Ordered detection records of one simulated or measured run.
/// Times are nondecreasing.
struct ClickStream {
  std::vector<Click> records;
  StreamMetadata metadata;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
  bool pulsed() const noexcept { return metadata.pulsed.has_value(); }

  /// Number of pulses: from metadata, else one past the largest index.
  std::uint64_t num_pulses() const noexcept;
  /// Observation time: from metadata, else the span of the records.
  double duration() const noexcept;
};

/// Throws if times decrease, a time is non-finite, or pulse indices of a
/// pulsed stream decrease.
void validate_stream(const ClickStream& stream);

// CSV: header `pulse_index,time_seconds`; stationary records carry `NA`.
void write_stream_csv(const ClickStream& stream, std::ostream& out);
std::vector<Click> read_stream_csv(std::istream& in);

// Binary: per record a little-endian u64 pulse index then an f64 time.
void write_stream_binary(const ClickStream& stream, std::ostream& out);
std::vector<Click> read_stream_binary(std::istream& in);

std::string metadata_to_json(const StreamMetadata& metadata, std::size_t record_count);
StreamMetadata metadata_from_json(const std::string& json);

enum class StreamFormat { csv, binary };

/// Writes the stream and a `<path>.json` sidecar with the metadata.
void save_stream(const ClickStream& stream, const std::filesystem::path& path, StreamFormat format);
/// Loads a stream; the format follows the extension (`.bin` is binary) and
/// the sidecar is read when present.
ClickStream load_stream(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& stream_path);

}  // namespace photocorr
