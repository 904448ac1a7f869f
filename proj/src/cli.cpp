#include "photocorr/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "photocorr/errors.hpp"
#include "photocorr/figures.hpp"
#include "photocorr/selftest.hpp"
#include "photocorr/simulate.hpp"
#include "photocorr/text.hpp"

namespace photocorr {

namespace {

using text::format_double;

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::filesystem::path with_suffix(const std::string& prefix, const std::string& suffix) {
  return std::filesystem::path(prefix + suffix);
}

bool is_stationary(const ClickStream& s) {
  if (s.metadata.stationary) return true;
  if (s.metadata.pulsed) return false;
  return !s.empty() && s.records.front().pulse_index == kNoPulse;
}

AnalyzeOutput analyze_stationary(const ClickStream& stream, const ExperimentConfig& config) {
  const double bandwidth = stream.metadata.stationary ? stream.metadata.stationary->bandwidth : config.bandwidth;
  if (!(bandwidth > 0.0) && (config.bin_width <= 0.0 || config.max_tau <= 0.0)) {
    throw ConfigError("stationary analysis needs a bandwidth or explicit bin width and max tau");
  }
  const double w = config.bin_width > 0.0 ? config.bin_width : 1.0 / (50.0 * bandwidth);
  const double max_tau = config.max_tau > 0.0 ? config.max_tau : 10.0 / bandwidth;
  AnalyzeOutput result;
  result.curve = stationary_conditional_probability(stream, w, max_tau, {config.start_stop, 0.0});
  const auto& c = *result.curve;

  result.histogram_path = with_suffix(config.out, ".curve.csv");
  auto csv = open_output(result.histogram_path);
  csv << "tau_seconds,pc_per_second,g2,pairs\n";
  for (std::size_t i = 0; i < c.tau.size(); ++i) {
    csv << format_double(c.tau[i]) << ',' << format_double(c.pc[i]) << ',' << format_double(c.g2[i]) << ','
        << c.pairs[i] << '\n';
  }
  finish_output(csv, result.histogram_path);

  nlohmann::json j;
  j["peak_ratio"] = c.peak_ratio.value;
  j["peak_ratio_sigma"] = c.peak_ratio.uncertainty;
  j["tail_ratio"] = c.tail_ratio.value;
  j["tail_ratio_sigma"] = c.tail_ratio.uncertainty;
  j["peak_fwhm_seconds"] = c.peak_fwhm;
  j["baseline_per_second"] = c.baseline;
  j["total_clicks"] = c.total_clicks;
  j["duration_seconds"] = c.duration;
  j["bin_width_seconds"] = c.bin_width;
  result.report_path = with_suffix(config.out, ".report.json");
  auto out = open_output(result.report_path);
  out << j.dump(2) << '\n';
  finish_output(out, result.report_path);
  return result;
}

AnalyzeOutput analyze_pulsed(const ClickStream& stream, ExperimentConfig config, bool mode_override,
                             std::ostream& warn) {
  if (!mode_override && !stream.metadata.mode_spec.empty()) config.mode = stream.metadata.mode_spec;
  if (stream.metadata.pulsed) config.period = stream.metadata.pulsed->repetition_period;
  const auto mode = config.build_mode();
  const double w = config.effective_bin_width();
  const double max_tau = config.effective_max_tau();
  const auto hist = tau_histogram(stream, w, max_tau, PairingScope::same_pulse, config.threads, config.start_stop);

  std::optional<QuantumState> state;
  if (!stream.metadata.state_spec.empty()) {
    try {
      state = parse_state_spec(stream.metadata.state_spec);
    } catch (const std::exception& e) {
      warn << "warning: ignoring state in metadata: " << e.what() << '\n';
    }
  }

  AnalyzeOutput result;
  result.report = build_report(stream, hist, mode, state);
  auto& report = *result.report;
  const double hint = std::sqrt(2.0) * mode.intensity_rms_width();
  if (report.fitted_width && std::fabs(*report.fitted_width / hint - 1.0) > 0.1) {
    warn << "warning: fitted pulse width " << format_double(*report.fitted_width)
         << " s differs from the mode width " << format_double(hint) << " s by more than 10%\n";
    report.flags.push_back("width_mismatch");
  }

  std::vector<double> expected;
  if (state && stream.metadata.pulsed && mean_photon_number(*state) > 0.0) {
    expected = expected_pair_counts(*state, stream.metadata.detector, mode, hist.num_pulses, w, hist.num_bins());
  }
  result.histogram_path = with_suffix(config.out, ".hist.csv");
  auto csv = open_output(result.histogram_path);
  csv << "tau_seconds,count,expected_analytic\n";
  for (std::size_t b = 0; b < hist.num_bins(); ++b) {
    csv << format_double(hist.bin_center(b)) << ',' << hist.counts[b] << ',';
    if (!expected.empty()) csv << format_double(expected[b]);
    csv << '\n';
  }
  finish_output(csv, result.histogram_path);

  result.report_path = with_suffix(config.out, ".report.json");
  auto out = open_output(result.report_path);
  out << report_to_json(report) << '\n';
  finish_output(out, result.report_path);
  return result;
}

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> pulses;
  std::optional<std::string> state;
  std::optional<std::string> mode;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<double> bin_width;
  std::optional<double> max_tau;
  std::optional<std::string> format;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path, "Experiment config file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Random seed");
    app.add_option("--pulses", pulses, "Number of pulses");
    app.add_option("--state", state, "State spec, e.g. thermal:0.5");
    app.add_option("--mode", mode, "Mode spec, e.g. gauss:1e-9");
    app.add_option("--out", out, "Output path prefix");
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--bin-width", bin_width, "Histogram bin width in seconds");
    app.add_option("--max-tau", max_tau, "Largest time difference in seconds");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (seed) c.seed = *seed;
    if (pulses) c.pulses = *pulses;
    if (state) c.state = *state;
    if (mode) c.mode = *mode;
    if (out) c.out = *out;
    if (threads) c.threads = *threads;
    if (bin_width) c.bin_width = *bin_width;
    if (max_tau) c.max_tau = *max_tau;
    if (format) {
      if (*format == "csv") {
        c.format = StreamFormat::csv;
      } else if (*format == "binary") {
        c.format = StreamFormat::binary;
      } else {
        throw ConfigError("--format must be csv or binary");
      }
    }
    return c;
  }
};

void validate_config(const ExperimentConfig& c) {
  try {
    c.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

std::filesystem::path stream_output_path(const ExperimentConfig& config) {
  std::filesystem::path p(config.out);
  const auto ext = p.extension();
  if (ext == ".csv" || ext == ".bin") return p;
  return with_suffix(config.out, config.format == StreamFormat::binary ? ".bin" : ".csv");
}

std::filesystem::path run_simulate(const ExperimentConfig& config) {
  validate_config(config);
  ClickStream stream;
  if (config.run == RunKind::pulsed) {
    stream = simulate_pulse_train(config.build_state(), config.detector, config.build_train(), config.seed,
                                  config.threads);
  } else if (config.source == StationarySource::thermal) {
    stream = simulate_stationary_thermal(config.build_stationary(), config.detector, config.seed, config.threads);
  } else {
    stream = simulate_stationary_poisson(config.rate, config.duration, config.detector, config.seed);
  }
  const auto path = stream_output_path(config);
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  save_stream(stream, path, path.extension() == ".bin" ? StreamFormat::binary : StreamFormat::csv);
  return path;
}

AnalyzeOutput run_analyze(const std::filesystem::path& stream_path, const ExperimentConfig& config,
                          bool mode_override, std::ostream& warn) {
  config.detector.validate();
  const auto stream = load_stream(stream_path);
  if (is_stationary(stream)) return analyze_stationary(stream, config);
  return analyze_pulsed(stream, config, mode_override, warn);
}

std::filesystem::path run_figure(int id, const ExperimentConfig& config) {
  if (id < 1 || id > 4) throw ConfigError("unknown figure id " + std::to_string(id) + " (expected 1..4)");
  config.detector.validate();
  const auto path = with_suffix(config.out, ".fig" + std::to_string(id) + ".csv");
  auto out = open_output(path);
  write_figure(id, config, out);
  finish_output(out, path);
  return path;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-correlation simulator and g2 estimators for pulsed light"};
  app.require_subcommand(1);

  Overrides sim_o;
  auto* sim = app.add_subcommand("simulate", "Simulate a click stream");
  sim_o.add_to(*sim);
  sim->add_option("--format", sim_o.format, "Stream format: csv or binary");

  Overrides ana_o;
  std::string stream_path;
  auto* ana = app.add_subcommand("analyze", "Estimate coherence measures from a click stream");
  ana->add_option("stream", stream_path, "Stream file (.csv or .bin)")->required();
  ana_o.add_to(*ana);

  Overrides fig_o;
  int figure_id = 0;
  auto* fig = app.add_subcommand("figure", "Emit the dataset behind a figure");
  fig->add_option("id", figure_id, "Figure number 1..4")->required();
  fig_o.add_to(*fig);

  Overrides self_o;
  double scale = 0.1;
  std::vector<int> criteria;
  bool verbose = false;
  auto* self = app.add_subcommand("selftest", "Run the acceptance suite at reduced size");
  self_o.add_to(*self);
  self->add_option("--scale", scale, "Fraction of the full-size runs")->check(CLI::Range(1e-4, 1.0));
  self->add_option("--criterion", criteria, "Criterion ids to run (default all)")->check(CLI::Range(1, 7));
  self->add_flag("--verbose,-v", verbose, "Print every check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sim) {
      const auto path = run_simulate(sim_o.resolve());
      out << "wrote " << path.string() << '\n';
    } else if (*ana) {
      const auto result = run_analyze(stream_path, ana_o.resolve(), ana_o.mode.has_value(), err);
      out << "wrote " << result.report_path.string() << " and " << result.histogram_path.string() << '\n';
    } else if (*fig) {
      const auto path = run_figure(figure_id, fig_o.resolve());
      out << "wrote " << path.string() << '\n';
    } else if (*self) {
      const auto cfg = self_o.resolve();
      AcceptanceOptions opt;
      opt.scale = self_o.pulses ? std::min(1.0, static_cast<double>(*self_o.pulses) / 1e6) : scale;
      opt.threads = cfg.threads;
      if (self_o.seed) opt.seed = *self_o.seed;
      if (criteria.empty()) criteria = {1, 2, 3, 4, 5, 6, 7};
      bool all = true;
      for (const int id : criteria) {
        const auto r = run_criterion(id, opt);
        print_result(r, out, verbose);
        all = all && r.passed;
      }
      return all ? kExitOk : kExitEstimation;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const EstimationError& e) {
    err << "estimation error: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const DomainError& e) {
    err << "estimation error: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitEstimation;
  }
  return kExitOk;
}

}  // namespace photocorr
