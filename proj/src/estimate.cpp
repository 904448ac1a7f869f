#include "photocorr/estimate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <tuple>

#include "photocorr/errors.hpp"
#include "photocorr/numeric.hpp"
#include "photocorr/parallel.hpp"

namespace photocorr {

namespace {

constexpr std::size_t kBootstrapReplicates = 300;
constexpr std::uint64_t kBootstrapSeed = 0xB0075EEDULL;
constexpr std::size_t kHistogramChunks = 64;
constexpr std::size_t kSidepeakBlocks = 200;

// Resamples `total` units with replacement from categories of sizes `sizes`.
std::vector<std::uint64_t> multinomial_resample(std::span<const std::uint64_t> sizes,
                                                std::uint64_t total, Rng& rng) {
  std::vector<std::uint64_t> out(sizes.size(), 0);
  std::uint64_t remaining = total;
  double mass = static_cast<double>(total);
  for (std::size_t c = 0; c < sizes.size() && remaining > 0; ++c) {
    if (c + 1 == sizes.size()) {
      out[c] = remaining;
      break;
    }
    const double p = std::clamp(static_cast<double>(sizes[c]) / mass, 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> draw(remaining, p);
    out[c] = draw(rng);
    remaining -= out[c];
    mass -= static_cast<double>(sizes[c]);
  }
  return out;
}

// Sample standard deviation of `stat` over bootstrap replicates of the
// categories; non-finite replicate values are skipped.
template <typename Stat>
double bootstrap_sd(std::span<const std::uint64_t> sizes, Stat stat, std::uint64_t salt = 0) {
  std::uint64_t total = 0;
  for (auto s : sizes) total += s;
  if (total == 0 || sizes.empty()) return 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < kBootstrapReplicates; ++r) {
    Rng rng = Rng::substream(kBootstrapSeed + salt, StreamTag::bootstrap, r);
    const auto resampled = multinomial_resample(sizes, total, rng);
    const double v = stat(std::span<const std::uint64_t>(resampled));
    if (!std::isfinite(v)) continue;
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
}

std::vector<std::uint64_t> multiplicities(const std::vector<PulseTally>& tallies) {
  std::vector<std::uint64_t> m;
  m.reserve(tallies.size());
  for (const auto& t : tallies) m.push_back(t.multiplicity);
  return m;
}

template <typename Field>
double weighted_sum(const std::vector<PulseTally>& tallies, std::span<const std::uint64_t> weights,
                    Field field) {
  double sum = 0.0;
  for (std::size_t i = 0; i < tallies.size(); ++i) {
    sum += static_cast<double>(field(tallies[i])) * static_cast<double>(weights[i]);
  }
  return sum;
}

std::size_t bin_count(double bin_width, double max_tau) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) throw ConfigError("bin width must be > 0");
  if (!(max_tau > 0.0) || !std::isfinite(max_tau)) throw ConfigError("max tau must be > 0");
  const double n = std::ceil(max_tau / bin_width * (1.0 - 1e-12));
  if (n > 1e8) throw ConfigError("too many histogram bins");
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

// Splits [0, n) into at most `chunks` ranges whose boundaries do not cut
// through a run of equal pulse indices.
std::vector<std::size_t> pulse_aligned_cuts(const std::vector<Click>& r, std::size_t chunks) {
  std::vector<std::size_t> cuts{0};
  const std::size_t n = r.size();
  for (std::size_t c = 1; c < chunks; ++c) {
    std::size_t pos = std::max(cuts.back(), n * c / chunks);
    while (pos > 0 && pos < n && r[pos].pulse_index == r[pos - 1].pulse_index) ++pos;
    if (pos > cuts.back() && pos < n) cuts.push_back(pos);
  }
  cuts.push_back(n);
  return cuts;
}

using TallyKey = std::tuple<std::uint32_t, std::uint64_t, std::uint64_t, std::uint64_t>;

}  // namespace

std::uint64_t TauHistogram::total_pairs() const noexcept {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

TauHistogram tau_histogram(const ClickStream& stream, double bin_width, double max_tau,
                           PairingScope scope, unsigned threads, bool start_stop) {
  const std::size_t n_bins = bin_count(bin_width, max_tau);
  const double range = bin_width * static_cast<double>(n_bins);
  TauHistogram hist;
  hist.bin_width = bin_width;
  hist.counts.assign(n_bins, 0);
  hist.scope = scope;
  hist.start_stop = start_stop;
  hist.total_clicks = stream.size();
  hist.num_pulses = stream.num_pulses();
  const auto& r = stream.records;

  if (scope == PairingScope::same_pulse) {
    for (const auto& c : r) {
      if (c.pulse_index == kNoPulse) throw EstimationError("same-pulse pairing needs pulse indices");
    }
    const auto cuts = pulse_aligned_cuts(r, kHistogramChunks);
    const std::size_t n_chunks = cuts.size() - 1;
    std::vector<std::vector<std::uint64_t>> counts(n_chunks, std::vector<std::uint64_t>(n_bins, 0));
    std::vector<std::map<TallyKey, std::uint64_t>> tallies(n_chunks);
    std::vector<std::uint64_t> pulses_seen(n_chunks, 0);
    parallel_for_blocks(n_chunks, threads, [&](std::size_t k) {
      auto& cnt = counts[k];
      std::size_t i = cuts[k];
      while (i < cuts[k + 1]) {
        std::size_t j = i;
        while (j < cuts[k + 1] && r[j].pulse_index == r[i].pulse_index) ++j;
        std::uint64_t pairs = 0, bin0 = 0, bin1 = 0;
        for (std::size_t a = i; a < j; ++a) {
          const std::size_t b_end = start_stop ? std::min(j, a + 2) : j;
          for (std::size_t b = a + 1; b < b_end; ++b) {
            const double tau = std::fabs(r[b].time - r[a].time);
            if (tau >= range) continue;
            const auto bin = std::min(n_bins - 1, static_cast<std::size_t>(tau / bin_width));
            ++cnt[bin];
            ++pairs;
            if (bin == 0) ++bin0;
            if (bin == 1) ++bin1;
          }
        }
        ++tallies[k][{static_cast<std::uint32_t>(j - i), pairs, bin0, bin1}];
        ++pulses_seen[k];
        i = j;
      }
    });
    std::map<TallyKey, std::uint64_t> merged;
    std::uint64_t seen = 0;
    for (std::size_t k = 0; k < n_chunks; ++k) {
      for (std::size_t b = 0; b < n_bins; ++b) hist.counts[b] += counts[k][b];
      for (const auto& [key, m] : tallies[k]) merged[key] += m;
      seen += pulses_seen[k];
    }
    if (hist.num_pulses > seen) merged[{0, 0, 0, 0}] += hist.num_pulses - seen;
    hist.num_pulses = std::max(hist.num_pulses, seen);
    for (const auto& [key, m] : merged) {
      const auto& [clicks, pairs, b0, b1] = key;
      hist.pulse_tallies.push_back({clicks, pairs, b0, b1, m});
    }
    return hist;
  }

  const std::size_t n = r.size();
  const std::size_t n_chunks = std::min<std::size_t>(kHistogramChunks, std::max<std::size_t>(1, n));
  std::vector<std::vector<std::uint64_t>> counts(n_chunks, std::vector<std::uint64_t>(n_bins, 0));
  parallel_for_blocks(n_chunks, threads, [&](std::size_t k) {
    auto& cnt = counts[k];
    for (std::size_t a = n * k / n_chunks; a < n * (k + 1) / n_chunks; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const double tau = r[b].time - r[a].time;
        if (tau >= range) break;
        ++cnt[std::min(n_bins - 1, static_cast<std::size_t>(tau / bin_width))];
        if (start_stop) break;
      }
    }
  });
  for (const auto& cnt : counts) {
    for (std::size_t b = 0; b < n_bins; ++b) hist.counts[b] += cnt[b];
  }
  return hist;
}

double total_counts(const ClickStream& stream) { return static_cast<double>(stream.size()); }

namespace {

void require_same_pulse(const TauHistogram& hist) {
  if (hist.scope != PairingScope::same_pulse) throw EstimationError("estimator needs a same-pulse histogram");
}

// D(0) as a function of resampled pulse multiplicities.
struct D0Model {
  bool fit = false;
  double eta0 = 0.0;
  double model_mass = 0.0;  // Sum over bins of the eta integral
  double bin_width = 0.0;
  bool two_bins = false;

  double operator()(const std::vector<PulseTally>& tallies, std::span<const std::uint64_t> m) const {
    if (fit) {
      const double pairs = weighted_sum(tallies, m, [](const PulseTally& t) { return t.pairs; });
      return eta0 * pairs / model_mass;
    }
    const double c0 = weighted_sum(tallies, m, [](const PulseTally& t) { return t.bin0; });
    if (!two_bins) return c0 / bin_width;
    const double c1 = weighted_sum(tallies, m, [](const PulseTally& t) { return t.bin1; });
    return (7.0 * c0 - c1) / (6.0 * bin_width);
  }

  // D(0) that a single pair in the most informative bin would produce.
  double one_pair() const { return fit ? eta0 / model_mass : 7.0 / (6.0 * bin_width); }
};

D0Model make_d0_model(const TauHistogram& hist, const std::optional<TemporalMode>& mode_hint) {
  D0Model model;
  model.bin_width = hist.bin_width;
  model.two_bins = hist.num_bins() >= 2;
  if (mode_hint) {
    model.fit = true;
    model.eta0 = eta_numeric(*mode_hint, 0.0);
    for (std::size_t b = 0; b < hist.num_bins(); ++b) {
      model.model_mass += eta_integral(*mode_hint, hist.bin_lower(b), hist.bin_lower(b) + hist.bin_width);
    }
    if (!(model.model_mass > 0.0)) throw EstimationError("mode hint has no weight inside the histogram range");
  }
  return model;
}

double tally_clicks(const std::vector<PulseTally>& tallies, std::span<const std::uint64_t> m) {
  return weighted_sum(tallies, m, [](const PulseTally& t) { return t.clicks; });
}

void check_pairing(const ClickStream& stream, const TauHistogram& hist) {
  if (hist.total_clicks != stream.size()) throw EstimationError("histogram was not built from this stream");
}

// Statistic of the form scale * D0 / clicks^2 with bootstrap uncertainty.
Estimate ratio_estimate(const TauHistogram& hist, const D0Model& model, double scale) {
  const auto m = multiplicities(hist.pulse_tallies);
  const double clicks = tally_clicks(hist.pulse_tallies, m);
  if (clicks <= 0.0) throw EstimationError("no counts: g2 estimate undefined");
  Estimate e;
  const double d0 = model(hist.pulse_tallies, m);
  e.value = scale * d0 / (clicks * clicks);
  if (hist.total_pairs() == 0) {
    e.undetermined = true;
    e.uncertainty = scale * model.one_pair() / (clicks * clicks);
    return e;
  }
  e.uncertainty = bootstrap_sd(m, [&](std::span<const std::uint64_t> w) {
    const double c = tally_clicks(hist.pulse_tallies, w);
    return scale * model(hist.pulse_tallies, w) / (c * c);
  });
  return e;
}

}  // namespace

Estimate estimate_D0(const TauHistogram& hist, const std::optional<TemporalMode>& mode_hint) {
  require_same_pulse(hist);
  const D0Model model = make_d0_model(hist, mode_hint);
  const auto m = multiplicities(hist.pulse_tallies);
  Estimate e;
  if (hist.total_pairs() == 0) {
    e.value = 0.0;
    e.uncertainty = std::numeric_limits<double>::infinity();
    e.undetermined = true;
    return e;
  }
  e.value = model(hist.pulse_tallies, m);
  e.uncertainty = bootstrap_sd(m, [&](std::span<const std::uint64_t> w) {
    return model(hist.pulse_tallies, w);
  });
  return e;
}

Estimate g2p(const ClickStream& stream, const TauHistogram& hist,
             const std::optional<TemporalMode>& mode_hint) {
  require_same_pulse(hist);
  check_pairing(stream, hist);
  return ratio_estimate(hist, make_d0_model(hist, mode_hint), 1.0);
}

Estimate fit_gaussian_width(const TauHistogram& hist) {
  require_same_pulse(hist);
  const double total = static_cast<double>(hist.total_pairs());
  if (total < 10.0) throw EstimationError("too few pairs to fit the pulse width; use recover_g2q_general with a known mode");
  const double range = hist.max_tau();
  double second = 0.0;
  for (std::size_t b = 0; b < hist.num_bins(); ++b) {
    const double c = hist.bin_center(b);
    second += static_cast<double>(hist.counts[b]) * (c * c + hist.bin_width * hist.bin_width / 12.0);
  }
  const double guess = std::sqrt(second / total);
  // Negative log-likelihood of the binned half-normal truncated to the range.
  const auto nll = [&](double sigma) {
    const double norm = numeric::normal_cdf(range / sigma) - 0.5;
    double sum = 0.0;
    for (std::size_t b = 0; b < hist.num_bins(); ++b) {
      if (hist.counts[b] == 0) continue;
      const double lo = hist.bin_lower(b);
      const double p = (numeric::normal_cdf((lo + hist.bin_width) / sigma) - numeric::normal_cdf(lo / sigma)) / norm;
      sum -= static_cast<double>(hist.counts[b]) * std::log(std::max(p, 1e-300));
    }
    return sum;
  };
  const double lo = guess / 4.0;
  const double hi = guess * 4.0;
  const double sigma = numeric::golden_section_minimize(nll, lo, hi, guess * 1e-9);
  if (!std::isfinite(sigma) || sigma <= lo * 1.0001 || sigma >= hi * 0.9999) {
    throw EstimationError("pulse-width fit did not converge; use recover_g2q_general with a known mode");
  }
  const double h = sigma * 1e-3;
  const double curvature = (nll(sigma + h) - 2.0 * nll(sigma) + nll(sigma - h)) / (h * h);
  Estimate e;
  e.value = sigma;
  e.uncertainty = curvature > 0.0 ? 1.0 / std::sqrt(curvature) : std::numeric_limits<double>::infinity();
  return e;
}

Estimate recover_g2q_gaussian(const ClickStream& stream, const TauHistogram& hist,
                              std::uint64_t num_pulses, std::optional<double> width) {
  require_same_pulse(hist);
  check_pairing(stream, hist);
  const double w = width ? *width : fit_gaussian_width(hist).value;
  if (!(w > 0.0)) throw EstimationError("pulse width must be > 0");
  const D0Model model = make_d0_model(hist, TemporalMode::gaussian(w));
  return ratio_estimate(hist, model,
                        std::sqrt(2.0 * std::numbers::pi) * w * static_cast<double>(num_pulses));
}

Estimate recover_g2q_general(const ClickStream& stream, const TauHistogram& hist,
                             std::uint64_t num_pulses, const TemporalMode& mode) {
  require_same_pulse(hist);
  check_pairing(stream, hist);
  const D0Model model = make_d0_model(hist, mode);
  return ratio_estimate(hist, model, static_cast<double>(num_pulses) / model.eta0);
}

std::vector<std::uint64_t> click_number_histogram(const ClickStream& stream, std::uint64_t num_pulses) {
  std::vector<std::uint64_t> hist(1, 0);
  std::uint64_t seen = 0;
  const auto& r = stream.records;
  std::size_t i = 0;
  while (i < r.size()) {
    if (r[i].pulse_index == kNoPulse) throw EstimationError("photon-number histogram needs pulse indices");
    std::size_t j = i;
    while (j < r.size() && r[j].pulse_index == r[i].pulse_index) ++j;
    const std::size_t k = j - i;
    if (k >= hist.size()) hist.resize(k + 1, 0);
    ++hist[k];
    ++seen;
    i = j;
  }
  if (num_pulses < seen) throw EstimationError("stream has more occupied pulses than the pulse count");
  hist[0] += num_pulses - seen;
  return hist;
}

Estimate pn_histogram_g2q(const ClickStream& stream, const PulseTrainConfig& train) {
  return pn_histogram_g2q(stream, train.num_pulses);
}

Estimate pn_histogram_g2q(const ClickStream& stream, std::uint64_t num_pulses) {
  const auto hist = click_number_histogram(stream, num_pulses);
  const auto stat = [](std::span<const std::uint64_t> m) {
    double n = 0.0, first = 0.0, fact2 = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      const double kk = static_cast<double>(k);
      const double w = static_cast<double>(m[k]);
      n += w;
      first += kk * w;
      fact2 += kk * (kk - 1.0) * w;
    }
    return fact2 * n / (first * first);
  };
  double clicks = 0.0;
  for (std::size_t k = 0; k < hist.size(); ++k) clicks += static_cast<double>(k * hist[k]);
  if (clicks <= 0.0) throw EstimationError("no counts: photon-number g2 undefined");
  Estimate e;
  e.value = stat(hist);
  e.uncertainty = bootstrap_sd(hist, stat, 1);
  // With no multi-click pulse the bootstrap is degenerate; report the value
  // one two-click pulse would contribute instead.
  const double one_pair = 2.0 * static_cast<double>(num_pulses) / (clicks * clicks);
  if (e.uncertainty < one_pair && hist.size() <= 2) e.uncertainty = one_pair;
  return e;
}

Estimate g2_sidepeak(const ClickStream& stream, const PulseTrainConfig& train, double window,
                     std::uint32_t side_peaks) {
  return g2_sidepeak(stream, train.num_pulses, train.repetition_period, window, side_peaks);
}

Estimate g2_sidepeak(const ClickStream& stream, std::uint64_t num_pulses, double period,
                     double window, std::uint32_t side_peaks) {
  if (!(period > 0.0)) throw ConfigError("repetition period must be > 0");
  if (!(window > 0.0) || window > 0.5 * period) throw ConfigError("side-peak window must be in (0, period/2]");
  if (side_peaks < 1) throw ConfigError("need at least one side peak");
  if (num_pulses < side_peaks + 1) throw EstimationError("too few pulses for the requested side peaks");

  const std::size_t n_blocks = static_cast<std::size_t>(std::min<std::uint64_t>(kSidepeakBlocks, num_pulses));
  const std::size_t width = side_peaks + 1;
  // Per block: central pairs then side peak k at index k.
  std::vector<std::uint64_t> block_counts(n_blocks * width, 0);
  const auto& r = stream.records;
  const double reach = static_cast<double>(side_peaks) * period + window;
  for (std::size_t a = 0; a < r.size(); ++a) {
    const auto slot = static_cast<std::uint64_t>(std::max(0.0, std::floor(r[a].time / period)));
    const std::size_t blk = static_cast<std::size_t>(std::min<std::uint64_t>(slot, num_pulses - 1) * n_blocks / num_pulses);
    for (std::size_t b = a + 1; b < r.size(); ++b) {
      const double tau = r[b].time - r[a].time;
      if (tau >= reach) break;
      const double k = std::round(tau / period);
      if (std::fabs(tau - k * period) < window) ++block_counts[blk * width + static_cast<std::size_t>(k)];
    }
  }

  const double n = static_cast<double>(num_pulses);
  const auto stat = [&](std::span<const std::uint64_t> picks) {
    std::vector<double> sums(width, 0.0);
    for (std::size_t blk = 0; blk < n_blocks; ++blk) {
      for (std::size_t k = 0; k < width; ++k) {
        sums[k] += static_cast<double>(picks[blk]) * static_cast<double>(block_counts[blk * width + k]);
      }
    }
    double side = 0.0;
    for (std::size_t k = 1; k < width; ++k) side += sums[k] * n / (n - static_cast<double>(k));
    side /= static_cast<double>(side_peaks);
    return 2.0 * sums[0] / side;
  };

  std::vector<std::uint64_t> ones(n_blocks, 1);
  Estimate e;
  e.value = stat(ones);
  if (!std::isfinite(e.value)) throw EstimationError("side peaks are empty: no cross-pulse coincidences");
  e.uncertainty = bootstrap_sd(ones, stat, 2);
  double side_total = 0.0;
  for (std::size_t blk = 0; blk < n_blocks; ++blk) {
    for (std::size_t k = 1; k < width; ++k) side_total += static_cast<double>(block_counts[blk * width + k]);
  }
  const double one_pair = 2.0 * static_cast<double>(side_peaks) / side_total;
  if (e.uncertainty < one_pair) e.uncertainty = one_pair;
  return e;
}

StationaryCurve stationary_conditional_probability(const ClickStream& stream, double bin_width,
                                                   double max_tau, const StationaryOptions& options) {
  if (stream.empty()) throw EstimationError("empty stream: conditional probability undefined");
  const std::size_t n_bins = bin_count(bin_width, max_tau);
  const double range = bin_width * static_cast<double>(n_bins);
  const double duration = stream.duration();
  if (!(duration > range)) throw EstimationError("record shorter than the tau range");

  double block_length = options.block_length;
  if (block_length <= 0.0) {
    const auto& st = stream.metadata.stationary;
    block_length = st && st->bandwidth > 0.0 ? 10.0 / st->bandwidth : 10.0 * range;
  }
  const auto n_blocks = static_cast<std::size_t>(std::max(1.0, std::ceil(duration / block_length)));
  const std::size_t tail_start = n_bins / 2;

  StationaryCurve curve;
  curve.bin_width = bin_width;
  curve.duration = duration;
  curve.total_clicks = stream.size();
  curve.pairs.assign(n_bins, 0);
  // Per block: clicks, bin0 pairs, bin1 pairs, tail pairs.
  std::vector<std::array<std::uint64_t, 4>> blocks(n_blocks, {0, 0, 0, 0});
  const auto& r = stream.records;
  const double t0 = std::min(0.0, r.front().time);
  for (std::size_t a = 0; a < r.size(); ++a) {
    const auto blk = std::min(n_blocks - 1, static_cast<std::size_t>((r[a].time - t0) / block_length));
    auto& bk = blocks[blk];
    ++bk[0];
    for (std::size_t b = a + 1; b < r.size(); ++b) {
      const double tau = r[b].time - r[a].time;
      if (tau >= range) break;
      const auto bin = std::min(n_bins - 1, static_cast<std::size_t>(tau / bin_width));
      ++curve.pairs[bin];
      if (bin == 0) ++bk[1];
      if (bin == 1) ++bk[2];
      if (bin >= tail_start) ++bk[3];
      if (options.start_stop) break;
    }
  }

  const double clicks = static_cast<double>(stream.size());
  curve.baseline = clicks / duration;
  for (std::size_t b = 0; b < n_bins; ++b) {
    const double tau = bin_width * (static_cast<double>(b) + 0.5);
    // Pairs starting within tau of the record end are unobservable.
    const double pc = static_cast<double>(curve.pairs[b]) / (clicks * bin_width * (1.0 - tau / duration));
    curve.tau.push_back(tau);
    curve.pc.push_back(pc);
    curve.g2.push_back(pc / curve.baseline);
  }

  const double tail_bins = static_cast<double>(n_bins - tail_start);
  const auto summarize = [&](std::span<const std::uint64_t> picks, bool peak) {
    double c = 0.0, p0 = 0.0, p1 = 0.0, pt = 0.0, t = 0.0;
    for (std::size_t k = 0; k < n_blocks; ++k) {
      const double w = static_cast<double>(picks[k]);
      c += w * static_cast<double>(blocks[k][0]);
      p0 += w * static_cast<double>(blocks[k][1]);
      p1 += w * static_cast<double>(blocks[k][2]);
      pt += w * static_cast<double>(blocks[k][3]);
      t += w * block_length;
    }
    const double norm = t / (c * c * bin_width);
    if (peak) return (n_bins >= 2 ? (7.0 * p0 - p1) / 6.0 : p0) * norm;
    return pt / tail_bins * norm;
  };
  const std::vector<std::uint64_t> ones(n_blocks, 1);

  curve.peak_ratio.value = n_bins >= 2 ? (7.0 * curve.g2[0] - curve.g2[1]) / 6.0 : curve.g2[0];
  double tail = 0.0;
  for (std::size_t b = tail_start; b < n_bins; ++b) tail += curve.g2[b];
  curve.tail_ratio.value = tail / tail_bins;
  curve.peak_ratio.uncertainty = bootstrap_sd(ones, [&](auto w) { return summarize(w, true); }, 3);
  curve.tail_ratio.uncertainty = bootstrap_sd(ones, [&](auto w) { return summarize(w, false); }, 4);

  // Full width at half maximum of the excess over the tail level.
  const double half = 0.5 * (curve.peak_ratio.value - curve.tail_ratio.value);
  curve.peak_fwhm = 0.0;
  if (half > 0.0) {
    double prev_tau = 0.0;
    double prev_excess = 2.0 * half;
    for (std::size_t b = 0; b < n_bins; ++b) {
      const double excess = curve.g2[b] - curve.tail_ratio.value;
      if (excess < half) {
        const double frac = (prev_excess - half) / (prev_excess - excess);
        curve.peak_fwhm = 2.0 * (prev_tau + frac * (curve.tau[b] - prev_tau));
        break;
      }
      prev_tau = curve.tau[b];
      prev_excess = excess;
    }
  }
  return curve;
}

}  // namespace photocorr
