#pragma once

#include <iosfwd>

#include "photocorr/config.hpp"

namespace photocorr {

/// Writes the CSV dataset behind figure `id` (1..4). Run parameters come from
/// `config` where they apply:
///   1: per-slot click counts of a thermal and a coherent train with the
///      state's mean photon number (`pulse_index,slot_start_seconds,thermal,coherent`);
///   2: stationary thermal p_c(tau) with the chaotic-light model
///      (`tau_seconds,pc_per_second,g2,siegert_g2,baseline_per_second`);
///   3: same-pulse D(tau) histogram of a thermal train with its analytic
///      overlay (`tau_seconds,count,expected_analytic`);
///   4: g2p/g2q = eta(0)/N against the Gaussian width at the configured
///      period (`delta_tp_seconds,N,g2p_over_g2q_per_second`).
/// Throws ConfigError for an unknown id.
void write_figure(int id, const ExperimentConfig& config, std::ostream& out);

}  // namespace photocorr
