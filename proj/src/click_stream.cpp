#include "photocorr/click_stream.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "photocorr/errors.hpp"
#include "photocorr/text.hpp"

namespace photocorr {

using json = nlohmann::json;

void DetectorModel::validate() const {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw ConfigError("detector efficiency must be in [0,1]");
  if (!(timing_jitter_sigma >= 0.0) || !std::isfinite(timing_jitter_sigma)) {
    throw ConfigError("timing jitter must be >= 0");
  }
  if (!(dead_time >= 0.0) || !std::isfinite(dead_time)) throw ConfigError("dead time must be >= 0");
}

std::uint64_t ClickStream::num_pulses() const noexcept {
  if (metadata.pulsed) return metadata.pulsed->num_pulses;
  std::uint64_t n = 0;
  for (const auto& c : records) {
    if (c.pulse_index != kNoPulse) n = std::max(n, c.pulse_index + 1);
  }
  return n;
}

double ClickStream::duration() const noexcept {
  if (metadata.stationary) return metadata.stationary->duration;
  if (metadata.pulsed) return static_cast<double>(metadata.pulsed->num_pulses) * metadata.pulsed->repetition_period;
  if (records.size() < 2) return 0.0;
  return records.back().time - records.front().time;
}

void validate_stream(const ClickStream& stream) {
  const auto& r = stream.records;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i].time)) throw IoError("record " + std::to_string(i) + ": non-finite time");
    if (i == 0) continue;
    if (r[i].time < r[i - 1].time) throw IoError("record " + std::to_string(i) + ": time decreases");
    if (stream.pulsed() && r[i].pulse_index < r[i - 1].pulse_index) {
      throw IoError("record " + std::to_string(i) + ": pulse index decreases");
    }
  }
}

void write_stream_csv(const ClickStream& stream, std::ostream& out) {
  out << "pulse_index,time_seconds\n";
  for (const auto& c : stream.records) {
    if (c.pulse_index == kNoPulse) {
      out << "NA";
    } else {
      out << c.pulse_index;
    }
    out << ',' << text::format_double(c.time) << '\n';
  }
}

std::vector<Click> read_stream_csv(std::istream& in) {
  std::vector<Click> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = text::trim(line);
    if (t.empty()) continue;
    if (line_no == 1 && t.starts_with("pulse_index")) continue;
    const auto fields = text::split(t, ',');
    const std::size_t index = records.size();
    if (fields.size() != 2) {
      throw IoError("record " + std::to_string(index) + " (line " + std::to_string(line_no) +
                    "): expected 'pulse_index,time_seconds'");
    }
    Click c;
    try {
      const auto p = text::trim(fields[0]);
      if (p == "NA" || p.empty()) {
        c.pulse_index = kNoPulse;
      } else {
        const auto v = text::parse_integer(p, "pulse_index");
        if (v < 0) throw ConfigError("negative pulse_index");
        c.pulse_index = static_cast<std::uint64_t>(v);
      }
      c.time = text::parse_double(fields[1], "time_seconds");
    } catch (const ConfigError& e) {
      throw IoError("record " + std::to_string(index) + " (line " + std::to_string(line_no) + "): " + e.what());
    }
    records.push_back(c);
  }
  return records;
}

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  out.write(reinterpret_cast<const char*>(bits.data()), sizeof(T));
}

template <typename T>
bool get_le(std::istream& in, T& value) {
  std::array<unsigned char, sizeof(T)> bits{};
  in.read(reinterpret_cast<char*>(bits.data()), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) return false;
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  value = std::bit_cast<T>(bits);
  return true;
}

}  // namespace

void write_stream_binary(const ClickStream& stream, std::ostream& out) {
  for (const auto& c : stream.records) {
    put_le<std::uint64_t>(out, c.pulse_index);
    put_le<double>(out, c.time);
  }
}

std::vector<Click> read_stream_binary(std::istream& in) {
  std::vector<Click> records;
  while (true) {
    Click c;
    if (!get_le(in, c.pulse_index)) {
      if (in.gcount() != 0) throw IoError("record " + std::to_string(records.size()) + ": truncated pulse index");
      break;
    }
    if (!get_le(in, c.time)) throw IoError("record " + std::to_string(records.size()) + ": truncated time");
    records.push_back(c);
  }
  return records;
}

std::string metadata_to_json(const StreamMetadata& m, std::size_t record_count) {
  json j;
  j["seed"] = m.seed;
  j["state"] = m.state_spec;
  j["mode"] = m.mode_spec;
  j["detector"] = {{"efficiency", m.detector.efficiency},
                   {"timing_jitter_sigma", m.detector.timing_jitter_sigma},
                   {"dead_time", m.detector.dead_time}};
  if (m.pulsed) {
    j["pulsed"] = {{"num_pulses", m.pulsed->num_pulses},
                   {"repetition_period", m.pulsed->repetition_period}};
  }
  if (m.stationary) {
    j["stationary"] = {{"source", m.stationary->source},
                       {"mean_rate", m.stationary->mean_rate},
                       {"bandwidth", m.stationary->bandwidth},
                       {"duration", m.stationary->duration},
                       {"field_timestep", m.stationary->field_timestep},
                       {"lineshape", m.stationary->lineshape}};
  }
  j["records"] = record_count;
  return j.dump(2) + "\n";
}

StreamMetadata metadata_from_json(const std::string& text) {
  StreamMetadata m;
  try {
    const json j = json::parse(text);
    m.seed = j.value("seed", std::uint64_t{0});
    m.state_spec = j.value("state", std::string());
    m.mode_spec = j.value("mode", std::string());
    if (j.contains("detector")) {
      const auto& d = j["detector"];
      m.detector.efficiency = d.value("efficiency", 1.0);
      m.detector.timing_jitter_sigma = d.value("timing_jitter_sigma", 0.0);
      m.detector.dead_time = d.value("dead_time", 0.0);
    }
    if (j.contains("pulsed")) {
      const auto& p = j["pulsed"];
      m.pulsed = PulsedRunInfo{p.at("num_pulses").get<std::uint64_t>(),
                               p.at("repetition_period").get<double>()};
    }
    if (j.contains("stationary")) {
      const auto& s = j["stationary"];
      m.stationary = StationaryRunInfo{s.value("source", std::string("thermal")),
                                       s.value("mean_rate", 0.0),
                                       s.value("bandwidth", 0.0),
                                       s.at("duration").get<double>(),
                                       s.value("field_timestep", 0.0),
                                       s.value("lineshape", std::string())};
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed stream metadata: ") + e.what());
  }
  return m;
}

std::filesystem::path sidecar_path(const std::filesystem::path& stream_path) {
  auto p = stream_path;
  p += ".json";
  return p;
}

void save_stream(const ClickStream& stream, const std::filesystem::path& path, StreamFormat format) {
  {
    std::ofstream out(path, format == StreamFormat::binary ? std::ios::binary : std::ios::out);
    if (!out) throw IoError("cannot write stream '" + path.string() + "'");
    if (format == StreamFormat::binary) {
      write_stream_binary(stream, out);
    } else {
      write_stream_csv(stream, out);
    }
    if (!out) throw IoError("failed writing stream '" + path.string() + "'");
  }
  std::ofstream side(sidecar_path(path));
  if (!side) throw IoError("cannot write metadata '" + sidecar_path(path).string() + "'");
  side << metadata_to_json(stream.metadata, stream.size());
}

ClickStream load_stream(const std::filesystem::path& path) {
  ClickStream stream;
  const bool binary = path.extension() == ".bin";
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open stream '" + path.string() + "'");
  stream.records = binary ? read_stream_binary(in) : read_stream_csv(in);
  if (std::ifstream side(sidecar_path(path)); side) {
    std::stringstream buf;
    buf << side.rdbuf();
    stream.metadata = metadata_from_json(buf.str());
  }
  validate_stream(stream);
  return stream;
}

}  // namespace photocorr
