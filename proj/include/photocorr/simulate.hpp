#pragma once

#include <cstdint>
#include <vector>

#include "photocorr/click_stream.hpp"
#include "photocorr/modes.hpp"
#include "photocorr/states.hpp"

namespace photocorr {

/// Train of N identical pulses; pulse p occupies the slot
/// [p T, (p+1) T) and its mode is centered at p T + T/2 (plus the mode's own
/// center offset).
struct PulseTrainConfig {
  std::uint64_t num_pulses = 1;
  double repetition_period = 12.5e-9;
  TemporalMode mode = TemporalMode::gaussian(1e-9);

  /// Rejects overlapping pulses (period <= 10 pulse widths) and modes that
  /// do not fit inside their slot.
  void validate() const;
};

enum class Lineshape { gaussian, lorentzian };

/// Stationary chaotic light. `bandwidth` is the full width at half maximum
/// of the field power spectrum, in hertz.
struct StationaryThermalConfig {
  double mean_rate = 1e5;     // photons per second before detection
  double bandwidth = 1e6;     // Hz
  double duration = 10.0;     // s
  double field_timestep = 0;  // s; 0 selects 1 / (20 bandwidth)
  Lineshape lineshape = Lineshape::gaussian;

  double timestep() const noexcept;
  void validate() const;
};

/// Per pulse: n ~ P_n, binomial loss with the detector efficiency, then i.i.d.
/// arrival times from |v(t)|^2. Identical (seed, inputs) give bit-identical
/// streams for any thread count.
ClickStream simulate_pulse_train(const QuantumState& state, const DetectorModel& detector,
                                 const PulseTrainConfig& train, std::uint64_t seed,
                                 unsigned threads = 1);

/// Cox process driven by |E(t)|^2 of a spectrally filtered circular Gaussian
/// field, scaled to mean_rate * efficiency.
ClickStream simulate_stationary_thermal(const StationaryThermalConfig& config,
                                        const DetectorModel& detector, std::uint64_t seed,
                                        unsigned threads = 1);

/// Constant-rate Poisson process (coherent stationary light).
ClickStream simulate_stationary_poisson(double mean_rate, double duration,
                                        const DetectorModel& detector, std::uint64_t seed);

/// Applies timing jitter then non-paralyzable dead time, in place.
void apply_detector_effects(std::vector<Click>& records, const DetectorModel& detector,
                            std::uint64_t seed);

/// |g1(tau)| of the synthesized field.
double field_coherence(const StationaryThermalConfig& config, double tau);

/// Chaotic-light intensity correlation 1 + |g1(tau)|^2.
double siegert_g2(const StationaryThermalConfig& config, double tau);

/// Conditional count density s G2/<n> |v(t+tau)|^2 for a single temporal
/// mode. Throws DomainError for vacuum.
double analytic_pc(const QuantumState& state, const DetectorModel& detector,
                   const TemporalMode& mode, double t_plus_tau);

/// Expected time-difference density N s^2 G2 eta(tau).
double analytic_D(const QuantumState& state, const DetectorModel& detector,
                  const TemporalMode& mode, std::uint64_t num_pulses, double tau);

/// Expected total counts N s <n>.
double analytic_Ip(const QuantumState& state, const DetectorModel& detector,
                   std::uint64_t num_pulses);

/// Expected same-pulse pair counts per bin of a folded (tau >= 0, unordered
/// pairs) histogram: the integral of D over each bin.
std::vector<double> expected_pair_counts(const QuantumState& state, const DetectorModel& detector,
                                         const TemporalMode& mode, std::uint64_t num_pulses,
                                         double bin_width, std::size_t num_bins);

}  // namespace photocorr
