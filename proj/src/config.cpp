#include "photocorr/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "photocorr/errors.hpp"
#include "photocorr/text.hpp"

namespace photocorr {

namespace {

double pulse_width(const TemporalMode& mode) { return std::numbers::sqrt2 * mode.intensity_rms_width(); }

bool parse_bool(std::string_view v, std::string_view what) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("invalid boolean for " + std::string(what) + ": '" + std::string(v) + "'");
}

std::uint64_t parse_count(std::string_view v, std::string_view what) {
  const auto n = text::parse_integer(v, what);
  if (n < 0) throw ConfigError(std::string(what) + " must be >= 0");
  return static_cast<std::uint64_t>(n);
}

void apply(ExperimentConfig& c, std::string_view section, std::string_view key, std::string_view value) {
  const std::string k = std::string(section) + "." + std::string(key);
  const auto num = [&] { return text::parse_double(value, k); };
  if (k == "state.spec") {
    c.state = std::string(value);
  } else if (k == "mode.spec") {
    c.mode = std::string(value);
  } else if (k == "detector.efficiency") {
    c.detector.efficiency = num();
  } else if (k == "detector.jitter") {
    c.detector.timing_jitter_sigma = num();
  } else if (k == "detector.dead_time") {
    c.detector.dead_time = num();
  } else if (k == "run.kind") {
    if (value == "pulsed") {
      c.run = RunKind::pulsed;
    } else if (value == "stationary") {
      c.run = RunKind::stationary;
    } else {
      throw ConfigError("run.kind must be 'pulsed' or 'stationary'");
    }
  } else if (k == "run.pulses") {
    c.pulses = parse_count(value, k);
  } else if (k == "run.period") {
    c.period = num();
  } else if (k == "run.source") {
    if (value == "thermal") {
      c.source = StationarySource::thermal;
    } else if (value == "poisson") {
      c.source = StationarySource::poisson;
    } else {
      throw ConfigError("run.source must be 'thermal' or 'poisson'");
    }
  } else if (k == "run.rate") {
    c.rate = num();
  } else if (k == "run.bandwidth") {
    c.bandwidth = num();
  } else if (k == "run.duration") {
    c.duration = num();
  } else if (k == "run.timestep") {
    c.timestep = num();
  } else if (k == "run.lineshape") {
    if (value == "gaussian") {
      c.lineshape = Lineshape::gaussian;
    } else if (value == "lorentzian") {
      c.lineshape = Lineshape::lorentzian;
    } else {
      throw ConfigError("run.lineshape must be 'gaussian' or 'lorentzian'");
    }
  } else if (k == "estimator.bin_width") {
    c.bin_width = num();
  } else if (k == "estimator.max_tau") {
    c.max_tau = num();
  } else if (k == "estimator.start_stop") {
    c.start_stop = parse_bool(value, k);
  } else if (k == "estimator.sidepeak_window") {
    c.sidepeak_window = num();
  } else if (k == "estimator.side_peaks") {
    c.side_peaks = static_cast<std::uint32_t>(parse_count(value, k));
  } else if (k == "general.seed") {
    c.seed = parse_count(value, k);
  } else if (k == "general.threads") {
    c.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, parse_count(value, k)));
  } else if (k == "output.path") {
    c.out = std::string(value);
  } else if (k == "output.format") {
    if (value == "csv") {
      c.format = StreamFormat::csv;
    } else if (value == "binary") {
      c.format = StreamFormat::binary;
    } else {
      throw ConfigError("output.format must be 'csv' or 'binary'");
    }
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "' in section [" + std::string(section) + "]");
  }
}

}  // namespace

QuantumState ExperimentConfig::build_state() const { return parse_state_spec(state); }

TemporalMode ExperimentConfig::build_mode() const { return parse_mode_spec(mode); }

PulseTrainConfig ExperimentConfig::build_train() const {
  PulseTrainConfig train{pulses, period, build_mode()};
  train.validate();
  return train;
}

StationaryThermalConfig ExperimentConfig::build_stationary() const {
  StationaryThermalConfig st{rate, bandwidth, duration, timestep, lineshape};
  if (source == StationarySource::thermal) st.validate();
  return st;
}

double ExperimentConfig::effective_bin_width() const {
  if (bin_width > 0.0) return bin_width;
  if (run == RunKind::stationary) return 1.0 / (50.0 * bandwidth);
  return pulse_width(build_mode()) / 20.0;
}

double ExperimentConfig::effective_max_tau() const {
  if (max_tau > 0.0) return max_tau;
  if (run == RunKind::stationary) return 10.0 / bandwidth;
  return std::min(8.0 * pulse_width(build_mode()), 0.5 * period);
}

double ExperimentConfig::effective_sidepeak_window() const {
  return sidepeak_window > 0.0 ? sidepeak_window : 0.5 * period;
}

void ExperimentConfig::validate() const {
  detector.validate();
  if (bin_width < 0.0 || max_tau < 0.0 || sidepeak_window < 0.0) {
    throw ConfigError("estimator settings must be >= 0");
  }
  if (run == RunKind::pulsed) {
    build_state();
    build_train();
  } else {
    if (source == StationarySource::poisson) {
      if (!(rate >= 0.0) || !(duration > 0.0)) throw ConfigError("poisson source needs rate >= 0 and duration > 0");
    } else {
      build_stationary();
    }
  }
}

ExperimentConfig parse_config(std::string_view text_in, std::string_view source) {
  ExperimentConfig c;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text_in)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto prefix = std::string(source) + ":" + std::to_string(line_no) + ": ";
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#' || t.front() == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(prefix + "unterminated section header");
      section = std::string(text::trim(t.substr(1, t.size() - 2)));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ConfigError(prefix + "expected 'key = value'");
    if (section.empty()) throw ConfigError(prefix + "key outside of a section");
    try {
      apply(c, section, text::trim(t.substr(0, eq)), text::trim(t.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(prefix + e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string emit_config(const ExperimentConfig& c) {
  const auto f = [](double v) { return text::format_double(v); };
  std::ostringstream out;
  out << "[state]\nspec = " << c.state << "\n\n";
  out << "[mode]\nspec = " << c.mode << "\n\n";
  out << "[detector]\nefficiency = " << f(c.detector.efficiency) << "\njitter = "
      << f(c.detector.timing_jitter_sigma) << "\ndead_time = " << f(c.detector.dead_time) << "\n\n";
  out << "[run]\nkind = " << (c.run == RunKind::pulsed ? "pulsed" : "stationary") << "\npulses = " << c.pulses
      << "\nperiod = " << f(c.period) << "\nsource = "
      << (c.source == StationarySource::thermal ? "thermal" : "poisson") << "\nrate = " << f(c.rate)
      << "\nbandwidth = " << f(c.bandwidth) << "\nduration = " << f(c.duration) << "\ntimestep = " << f(c.timestep)
      << "\nlineshape = " << (c.lineshape == Lineshape::gaussian ? "gaussian" : "lorentzian") << "\n\n";
  out << "[estimator]\nbin_width = " << f(c.bin_width) << "\nmax_tau = " << f(c.max_tau)
      << "\nstart_stop = " << (c.start_stop ? "true" : "false") << "\nsidepeak_window = " << f(c.sidepeak_window)
      << "\nside_peaks = " << c.side_peaks << "\n\n";
  out << "[general]\nseed = " << c.seed << "\nthreads = " << c.threads << "\n\n";
  out << "[output]\npath = " << c.out << "\nformat = " << (c.format == StreamFormat::csv ? "csv" : "binary")
      << "\n";
  return out.str();
}

}  // namespace photocorr
