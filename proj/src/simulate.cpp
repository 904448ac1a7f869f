#include "photocorr/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "photocorr/errors.hpp"
#include "photocorr/numeric.hpp"
#include "photocorr/parallel.hpp"

namespace photocorr {

namespace {

constexpr std::uint64_t kPulsesPerBlock = 4096;
constexpr std::size_t kFieldBlock = std::size_t{1} << 18;

// Width playing the role of Delta t_p for any mode kind: the Gaussian
// intensity has r.m.s. width Delta t_p / sqrt(2).
double equivalent_width(const TemporalMode& mode) {
  return std::numbers::sqrt2 * mode.intensity_rms_width();
}

StreamMetadata pulsed_metadata(const QuantumState& state, const DetectorModel& detector,
                               const PulseTrainConfig& train, std::uint64_t seed) {
  StreamMetadata m;
  m.seed = seed;
  m.state_spec = state.spec();
  m.mode_spec = train.mode.spec();
  m.detector = detector;
  m.pulsed = PulsedRunInfo{train.num_pulses, train.repetition_period};
  return m;
}

}  // namespace

void PulseTrainConfig::validate() const {
  if (num_pulses < 1) throw ConfigError("pulse train needs at least one pulse");
  if (!(repetition_period > 0.0) || !std::isfinite(repetition_period)) {
    throw ConfigError("repetition period must be > 0");
  }
  const double w = equivalent_width(mode);
  if (repetition_period <= 10.0 * w) {
    throw ConfigError("pulses overlap: repetition period must exceed 10 pulse widths");
  }
  const auto [lo, hi] = mode.support();
  if (mode.kind() == TemporalMode::Kind::sampled) {
    if (lo < -0.5 * repetition_period || hi > 0.5 * repetition_period) {
      throw ConfigError("sampled mode grid must lie within +/- half a repetition period");
    }
  } else if (std::fabs(mode.intensity_mean()) + 5.0 * w > 0.5 * repetition_period) {
    throw ConfigError("mode center too far from the middle of its slot");
  }
}

double StationaryThermalConfig::timestep() const noexcept {
  return field_timestep > 0.0 ? field_timestep : 1.0 / (20.0 * bandwidth);
}

void StationaryThermalConfig::validate() const {
  if (!(mean_rate > 0.0) || !std::isfinite(mean_rate)) throw ConfigError("mean rate must be > 0");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw ConfigError("bandwidth must be > 0");
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ConfigError("duration must be > 0");
  if (field_timestep < 0.0 || !std::isfinite(field_timestep)) throw ConfigError("field timestep must be >= 0");
  if (timestep() > (1.0 + 1e-12) / (20.0 * bandwidth)) {
    throw ConfigError("field timestep too coarse: must be <= 1/(20 bandwidth)");
  }
  if (duration < 100.0 / bandwidth) throw ConfigError("duration must be at least 100 coherence times (100/bandwidth)");
}

void apply_detector_effects(std::vector<Click>& records, const DetectorModel& detector,
                            std::uint64_t seed) {
  if (detector.timing_jitter_sigma > 0.0) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      Rng rng = Rng::substream(seed, StreamTag::detector, i);
      records[i].time += detector.timing_jitter_sigma * rng.normal();
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const Click& a, const Click& b) { return a.time < b.time; });
  }
  if (detector.dead_time > 0.0 && !records.empty()) {
    std::size_t kept = 1;
    double last = records.front().time;
    for (std::size_t i = 1; i < records.size(); ++i) {
      if (records[i].time - last >= detector.dead_time) {
        last = records[i].time;
        records[kept++] = records[i];
      }
    }
    records.resize(kept);
  }
}

ClickStream simulate_pulse_train(const QuantumState& state, const DetectorModel& detector,
                                 const PulseTrainConfig& train, std::uint64_t seed,
                                 unsigned threads) {
  detector.validate();
  train.validate();

  const std::uint64_t n_blocks = (train.num_pulses + kPulsesPerBlock - 1) / kPulsesPerBlock;
  std::vector<std::vector<Click>> blocks(n_blocks);
  const double period = train.repetition_period;
  const double s = detector.efficiency;

  parallel_for_blocks(n_blocks, threads, [&](std::size_t b) {
    auto& out = blocks[b];
    std::vector<double> times;
    const std::uint64_t first = b * kPulsesPerBlock;
    const std::uint64_t last = std::min(train.num_pulses, first + kPulsesPerBlock);
    for (std::uint64_t p = first; p < last; ++p) {
      Rng rng = Rng::substream(seed, StreamTag::pulse, p);
      const std::uint64_t photons = state.sample(rng);
      const std::uint64_t detected = rng.bernoulli_count(photons, s);
      if (detected == 0) continue;
      const double slot = static_cast<double>(p) * period;
      const double middle = slot + 0.5 * period;
      times.clear();
      for (std::uint64_t k = 0; k < detected; ++k) {
        double t;
        // Redraw the (< 1e-12 probable) arrivals that would leave the slot.
        do {
          t = middle + sample_arrival_time(train.mode, rng);
        } while (t < slot || t >= slot + period);
        times.push_back(t);
      }
      std::sort(times.begin(), times.end());
      for (double t : times) out.push_back({p, t});
    }
  });

  ClickStream stream;
  stream.metadata = pulsed_metadata(state, detector, train, seed);
  std::size_t total = 0;
  for (const auto& blk : blocks) total += blk.size();
  stream.records.reserve(total);
  for (const auto& blk : blocks) stream.records.insert(stream.records.end(), blk.begin(), blk.end());
  apply_detector_effects(stream.records, detector, seed);
  return stream;
}

namespace {

// Field amplitude filter taps h[k] for k in [first_tap, first_tap + size),
// normalized to Sum h^2 = 1 so that <|E|^2> = 1.
struct FieldFilter {
  std::vector<double> taps;
  std::int64_t first_tap = 0;
};

FieldFilter make_filter(const StationaryThermalConfig& cfg) {
  const double dt = cfg.timestep();
  FieldFilter f;
  if (cfg.lineshape == Lineshape::gaussian) {
    // Power spectrum FWHM bandwidth -> amplitude filter s.d. sqrt(2) sigma_S,
    // impulse response s.d. 1 / (2 pi sqrt(2) sigma_S).
    const double sigma_s = cfg.bandwidth / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    const double sigma_h = 1.0 / (2.0 * std::numbers::pi * std::numbers::sqrt2 * sigma_s);
    const auto half = static_cast<std::int64_t>(std::ceil(8.0 * sigma_h / dt));
    f.first_tap = -half;
    for (std::int64_t k = -half; k <= half; ++k) {
      const double t = static_cast<double>(k) * dt;
      f.taps.push_back(std::exp(-t * t / (2.0 * sigma_h * sigma_h)));
    }
  } else {
    // One-sided exponential response gives |g1| = exp(-pi bandwidth |tau|).
    const double alpha = std::numbers::pi * cfg.bandwidth;
    const auto len = static_cast<std::int64_t>(std::ceil(20.0 / (alpha * dt)));
    f.first_tap = 0;
    for (std::int64_t k = 0; k <= len; ++k) f.taps.push_back(std::exp(-alpha * static_cast<double>(k) * dt));
  }
  double norm = 0.0;
  for (double h : f.taps) norm += h * h;
  for (double& h : f.taps) h /= std::sqrt(norm);
  return f;
}

}  // namespace

double field_coherence(const StationaryThermalConfig& config, double tau) {
  if (config.lineshape == Lineshape::gaussian) {
    const double sigma_s = config.bandwidth / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    return std::exp(-2.0 * std::numbers::pi * std::numbers::pi * sigma_s * sigma_s * tau * tau);
  }
  return std::exp(-std::numbers::pi * config.bandwidth * std::fabs(tau));
}

double siegert_g2(const StationaryThermalConfig& config, double tau) {
  const double g1 = field_coherence(config, tau);
  return 1.0 + g1 * g1;
}

ClickStream simulate_stationary_thermal(const StationaryThermalConfig& config,
                                        const DetectorModel& detector, std::uint64_t seed,
                                        unsigned threads) {
  config.validate();
  detector.validate();
  const double dt = config.timestep();
  const auto samples = static_cast<std::size_t>(std::ceil(config.duration / dt));
  const std::size_t n_blocks = (samples + kFieldBlock - 1) / kFieldBlock;
  const FieldFilter filter = make_filter(config);
  const auto n_taps = static_cast<std::int64_t>(filter.taps.size());
  const double scale = config.mean_rate * detector.efficiency;
  const std::uint64_t noise_key = substream_key(seed, StreamTag::field_noise, 0);

  std::vector<std::vector<Click>> blocks(n_blocks);
  parallel_for_blocks(n_blocks, threads, [&](std::size_t b) {
    const std::size_t start = b * kFieldBlock;
    const std::size_t stop = std::min(samples, start + kFieldBlock);
    const std::size_t len = stop - start;
    // E[i] = Sum_k h[k] w[i - k]; noise index j maps to w_buf[j - origin].
    const std::int64_t last_tap = filter.first_tap + n_taps - 1;
    const std::int64_t origin = static_cast<std::int64_t>(start) - last_tap;
    const std::size_t noise_len = len + static_cast<std::size_t>(n_taps) - 1;
    std::vector<double> wr(noise_len), wi(noise_len);
    for (std::size_t j = 0; j < noise_len; ++j) {
      const auto pair = counter_normal_pair(noise_key, static_cast<std::uint64_t>(origin + static_cast<std::int64_t>(j)));
      wr[j] = pair.a * (0.5 * std::numbers::sqrt2);
      wi[j] = pair.b * (0.5 * std::numbers::sqrt2);
    }
    std::vector<double> er(len, 0.0), ei(len, 0.0);
    for (std::int64_t k = 0; k < n_taps; ++k) {
      const double h = filter.taps[static_cast<std::size_t>(k)];
      // Sample i uses noise index start + i - (first_tap + k).
      const std::size_t offset = static_cast<std::size_t>(last_tap - (filter.first_tap + k));
      const double* pr = wr.data() + offset;
      const double* pi = wi.data() + offset;
      for (std::size_t i = 0; i < len; ++i) {
        er[i] += h * pr[i];
        ei[i] += h * pi[i];
      }
    }

    // Time-rescaling: exponential gaps in integrated intensity give an exact
    // Poisson process for the piecewise-constant rate.
    Rng rng = Rng::substream(seed, StreamTag::field_clicks, b);
    auto& out = blocks[b];
    double need = rng.exponential();
    for (std::size_t i = 0; i < len; ++i) {
      const double rate = scale * (er[i] * er[i] + ei[i] * ei[i]);
      double t = static_cast<double>(start + i) * dt;
      const double t_end = std::min(static_cast<double>(start + i + 1) * dt, config.duration);
      if (rate <= 0.0) continue;
      while (t < t_end) {
        const double avail = rate * (t_end - t);
        if (need > avail) {
          need -= avail;
          break;
        }
        t += need / rate;
        out.push_back({kNoPulse, std::min(t, t_end)});
        need = rng.exponential();
      }
    }
  });

  ClickStream stream;
  stream.metadata.seed = seed;
  stream.metadata.detector = detector;
  stream.metadata.stationary =
      StationaryRunInfo{"thermal", config.mean_rate, config.bandwidth, config.duration, dt,
                        config.lineshape == Lineshape::gaussian ? "gaussian" : "lorentzian"};
  std::size_t total = 0;
  for (const auto& blk : blocks) total += blk.size();
  stream.records.reserve(total);
  for (const auto& blk : blocks) stream.records.insert(stream.records.end(), blk.begin(), blk.end());
  apply_detector_effects(stream.records, detector, seed);
  return stream;
}

ClickStream simulate_stationary_poisson(double mean_rate, double duration,
                                        const DetectorModel& detector, std::uint64_t seed) {
  detector.validate();
  if (!(mean_rate >= 0.0) || !std::isfinite(mean_rate)) throw ConfigError("mean rate must be >= 0");
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ConfigError("duration must be > 0");
  ClickStream stream;
  stream.metadata.seed = seed;
  stream.metadata.detector = detector;
  stream.metadata.stationary = StationaryRunInfo{"poisson", mean_rate, 0.0, duration, 0.0, ""};
  const double rate = mean_rate * detector.efficiency;
  if (rate > 0.0) {
    Rng rng = Rng::substream(seed, StreamTag::poisson, 0);
    double t = rng.exponential() / rate;
    while (t < duration) {
      stream.records.push_back({kNoPulse, t});
      t += rng.exponential() / rate;
    }
  }
  apply_detector_effects(stream.records, detector, seed);
  return stream;
}

double analytic_pc(const QuantumState& state, const DetectorModel& detector,
                   const TemporalMode& mode, double t_plus_tau) {
  const double mean = mean_photon_number(state);
  if (mean <= 0.0) throw DomainError("conditional probability undefined for vacuum");
  return detector.efficiency * second_factorial_moment(state) / mean * intensity_profile(mode, t_plus_tau);
}

double analytic_D(const QuantumState& state, const DetectorModel& detector,
                  const TemporalMode& mode, std::uint64_t num_pulses, double tau) {
  const double s = detector.efficiency;
  return static_cast<double>(num_pulses) * s * s * second_factorial_moment(state) *
         eta_numeric(mode, tau);
}

double analytic_Ip(const QuantumState& state, const DetectorModel& detector,
                   std::uint64_t num_pulses) {
  return static_cast<double>(num_pulses) * detector.efficiency * mean_photon_number(state);
}

std::vector<double> expected_pair_counts(const QuantumState& state, const DetectorModel& detector,
                                         const TemporalMode& mode, std::uint64_t num_pulses,
                                         double bin_width, std::size_t num_bins) {
  const double s = detector.efficiency;
  const double scale = static_cast<double>(num_pulses) * s * s * second_factorial_moment(state);
  std::vector<double> out(num_bins);
  for (std::size_t b = 0; b < num_bins; ++b) {
    const double lo = static_cast<double>(b) * bin_width;
    out[b] = scale * eta_integral(mode, lo, lo + bin_width);
  }
  return out;
}

}  // namespace photocorr
