#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "photocorr/click_stream.hpp"
#include "photocorr/modes.hpp"
#include "photocorr/simulate.hpp"
#include "photocorr/states.hpp"

namespace photocorr {

/// Value with a one-sigma statistical uncertainty. `undetermined` marks an
/// estimate with no information (infinite relative uncertainty).
struct Estimate {
  double value = 0.0;
  double uncertainty = 0.0;
  bool undetermined = false;
};

enum class PairingScope { same_pulse, all_pairs };

/// Pulses sharing the same per-pulse tallies. Pulses are the resampling unit
/// for bootstrap uncertainties.
struct PulseTally {
  std::uint32_t clicks = 0;
  std::uint64_t pairs = 0;  // same-pulse pairs inside the histogram range
  std::uint64_t bin0 = 0;
  std::uint64_t bin1 = 0;
  std::uint64_t multiplicity = 0;
};

/// Folded histogram of click time differences: unordered pairs, tau >= 0,
/// bins [k w, (k+1) w). For same-pulse scope the expected content of a bin
/// is the integral of D(tau) over it.
struct TauHistogram {
  double bin_width = 0.0;
  std::vector<std::uint64_t> counts;
  PairingScope scope = PairingScope::same_pulse;
  bool start_stop = false;
  std::uint64_t num_pulses = 0;
  std::uint64_t total_clicks = 0;
  std::vector<PulseTally> pulse_tallies;  // same_pulse scope only

  bool empty() const noexcept { return total_clicks == 0; }
  std::size_t num_bins() const noexcept { return counts.size(); }
  double max_tau() const noexcept { return bin_width * static_cast<double>(counts.size()); }
  double bin_lower(std::size_t b) const noexcept { return bin_width * static_cast<double>(b); }
  double bin_center(std::size_t b) const noexcept { return bin_width * (static_cast<double>(b) + 0.5); }
  std::uint64_t total_pairs() const noexcept;
};

/// Histograms pair time differences below `max_tau`. same_pulse pairs only
/// clicks sharing a pulse index; all_pairs pairs every click with every later
/// click (or only the next one when `start_stop`). Counts do not depend on
/// the thread count.
TauHistogram tau_histogram(const ClickStream& stream, double bin_width, double max_tau,
                           PairingScope scope, unsigned threads = 1, bool start_stop = false);

/// Number of click records.
double total_counts(const ClickStream& stream);

/// D(0) from a same-pulse histogram. With a mode hint the eta shape is fitted
/// (Poisson-weighted least squares) and evaluated at 0; otherwise the first
/// two bins give the central density with its O(w^2) bias removed.
Estimate estimate_D0(const TauHistogram& hist, const std::optional<TemporalMode>& mode_hint);

/// D(0) / I_p^2, in 1/seconds.
Estimate g2p(const ClickStream& stream, const TauHistogram& hist,
             const std::optional<TemporalMode>& mode_hint = std::nullopt);

/// Pulse width from a same-pulse histogram by binned maximum likelihood for
/// a folded Gaussian eta.
Estimate fit_gaussian_width(const TauHistogram& hist);

/// sqrt(2 pi) w N D(0) / I_p^2 for Gaussian pulses of width w. When `width`
/// is empty it is fitted from the histogram.
Estimate recover_g2q_gaussian(const ClickStream& stream, const TauHistogram& hist,
                              std::uint64_t num_pulses, std::optional<double> width = std::nullopt);

/// N D(0) / (I_p^2 eta(0)) for an arbitrary known mode.
Estimate recover_g2q_general(const ClickStream& stream, const TauHistogram& hist,
                             std::uint64_t num_pulses, const TemporalMode& mode);

/// Number of pulses with k clicks, k = 0, 1, ...
std::vector<std::uint64_t> click_number_histogram(const ClickStream& stream, std::uint64_t num_pulses);

/// g2 of the per-pulse click-number distribution; loss leaves it equal to
/// g2_q of the source.
Estimate pn_histogram_g2q(const ClickStream& stream, const PulseTrainConfig& train);
Estimate pn_histogram_g2q(const ClickStream& stream, std::uint64_t num_pulses);

/// Central-peak pairs (|tau| < window) over the mean of the side peaks at
/// k T, k = 1..side_peaks. Equals g2_q for independent pulses.
Estimate g2_sidepeak(const ClickStream& stream, const PulseTrainConfig& train, double window,
                     std::uint32_t side_peaks = 3);
Estimate g2_sidepeak(const ClickStream& stream, std::uint64_t num_pulses, double period,
                     double window, std::uint32_t side_peaks = 3);

struct StationaryOptions {
  bool start_stop = false;
  /// Bootstrap block length; 0 selects 10 / bandwidth from the stream
  /// metadata, or 10 max_tau when that is unknown.
  double block_length = 0.0;
};

/// Conditional count density p_c(tau) of a stationary stream together with
/// summaries of its HBT peak.
struct StationaryCurve {
  std::vector<double> tau;  // bin centers, s
  std::vector<double> pc;   // 1/s
  std::vector<double> g2;   // pc / baseline
  std::vector<std::uint64_t> pairs;
  double bin_width = 0.0;
  double baseline = 0.0;  // s <I> = total_clicks / duration
  double duration = 0.0;
  std::uint64_t total_clicks = 0;
  Estimate peak_ratio;  // g2 extrapolated to tau = 0
  Estimate tail_ratio;  // mean g2 over the upper half of the tau range
  double peak_fwhm = 0.0;
};

StationaryCurve stationary_conditional_probability(const ClickStream& stream, double bin_width,
                                                   double max_tau,
                                                   const StationaryOptions& options = {});

/// Every coherence measure recoverable from a pulsed stream.
struct CoherenceReport {
  std::optional<double> g2q_analytic;
  std::optional<Estimate> g2q_eta;
  std::optional<Estimate> g2q_pn;
  std::optional<Estimate> g2p;
  std::optional<Estimate> g2p_scaled;  // g2p N / eta(0), dimensionless
  std::optional<Estimate> D0;
  Estimate Ip;
  double eta0 = 0.0;
  std::uint64_t num_pulses = 0;
  std::optional<double> fitted_width;
  std::vector<std::string> flags;
};

CoherenceReport build_report(const ClickStream& stream, const TauHistogram& hist,
                             const TemporalMode& mode,
                             const std::optional<QuantumState>& state = std::nullopt);

/// JSON with keys g2q_analytic, g2q_eta, g2q_pn, g2p, eta0_per_second, Ip, N,
/// D0_per_second and matching `_sigma` fields.
std::string report_to_json(const CoherenceReport& report);

}  // namespace photocorr
