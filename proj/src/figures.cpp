#include "photocorr/figures.hpp"

#include <array>
#include <ostream>

#include "photocorr/errors.hpp"
#include "photocorr/estimate.hpp"
#include "photocorr/simulate.hpp"
#include "photocorr/text.hpp"

namespace photocorr {

namespace {

using text::format_double;

std::vector<std::uint64_t> clicks_per_pulse(const ClickStream& stream, std::uint64_t num_pulses) {
  std::vector<std::uint64_t> counts(num_pulses, 0);
  for (const auto& c : stream.records) {
    if (c.pulse_index < num_pulses) ++counts[c.pulse_index];
  }
  return counts;
}

void figure1(const ExperimentConfig& config, std::ostream& out) {
  const double mean = mean_photon_number(config.build_state());
  const auto train = config.build_train();
  const auto thermal = simulate_pulse_train(QuantumState::thermal(mean), config.detector, train, config.seed,
                                            config.threads);
  const auto coherent = simulate_pulse_train(QuantumState::coherent(mean), config.detector, train,
                                             config.seed + 1, config.threads);
  const auto a = clicks_per_pulse(thermal, train.num_pulses);
  const auto b = clicks_per_pulse(coherent, train.num_pulses);
  out << "pulse_index,slot_start_seconds,thermal,coherent\n";
  for (std::uint64_t p = 0; p < train.num_pulses; ++p) {
    out << p << ',' << format_double(static_cast<double>(p) * train.repetition_period) << ',' << a[p] << ','
        << b[p] << '\n';
  }
}

void figure2(const ExperimentConfig& config, std::ostream& out) {
  auto st = config.build_stationary();
  st.validate();
  const auto stream = simulate_stationary_thermal(st, config.detector, config.seed, config.threads);
  const double w = config.bin_width > 0.0 ? config.bin_width : 1.0 / (50.0 * st.bandwidth);
  const double max_tau = config.max_tau > 0.0 ? config.max_tau : 10.0 / st.bandwidth;
  const auto curve = stationary_conditional_probability(stream, w, max_tau, {config.start_stop, 0.0});
  out << "tau_seconds,pc_per_second,g2,siegert_g2,baseline_per_second\n";
  for (std::size_t i = 0; i < curve.tau.size(); ++i) {
    out << format_double(curve.tau[i]) << ',' << format_double(curve.pc[i]) << ',' << format_double(curve.g2[i])
        << ',' << format_double(siegert_g2(st, curve.tau[i])) << ',' << format_double(curve.baseline) << '\n';
  }
}

void figure3(const ExperimentConfig& config, std::ostream& out) {
  const auto state = config.build_state();
  const auto train = config.build_train();
  const auto stream = simulate_pulse_train(state, config.detector, train, config.seed, config.threads);
  const auto hist = tau_histogram(stream, config.effective_bin_width(), config.effective_max_tau(),
                                  PairingScope::same_pulse, config.threads);
  out << "tau_seconds,count,expected_analytic\n";
  for (std::size_t b = 0; b < hist.num_bins(); ++b) {
    const double tau = hist.bin_center(b);
    const double expected = analytic_D(state, config.detector, train.mode, train.num_pulses, tau) * hist.bin_width;
    out << format_double(tau) << ',' << hist.counts[b] << ',' << format_double(expected) << '\n';
  }
}

void figure4(const ExperimentConfig& config, std::ostream& out) {
  constexpr std::array<double, 4> kPulseCounts{1e3, 1e4, 1e5, 1e6};
  constexpr int kWidths = 24;
  const double lo = config.period / 250.0;
  const double hi = config.period / 10.5;
  out << "delta_tp_seconds,N,g2p_over_g2q_per_second\n";
  for (const double n : kPulseCounts) {
    for (int i = 0; i < kWidths; ++i) {
      const double width = lo + (hi - lo) * i / (kWidths - 1);
      const double eta0 = eta_numeric(TemporalMode::gaussian(width), 0.0);
      out << format_double(width) << ',' << static_cast<std::uint64_t>(n) << ',' << format_double(eta0 / n)
          << '\n';
    }
  }
}

}  // namespace

void write_figure(int id, const ExperimentConfig& config, std::ostream& out) {
  switch (id) {
    case 1: figure1(config, out); break;
    case 2: figure2(config, out); break;
    case 3: figure3(config, out); break;
    case 4: figure4(config, out); break;
    default: throw ConfigError("unknown figure id " + std::to_string(id) + " (expected 1..4)");
  }
}

}  // namespace photocorr
