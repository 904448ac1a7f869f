#include <cmath>

#include "json.hpp"
#include "photocorr/errors.hpp"
#include "photocorr/estimate.hpp"

namespace photocorr {

using json = nlohmann::json;

CoherenceReport build_report(const ClickStream& stream, const TauHistogram& hist,
                             const TemporalMode& mode, const std::optional<QuantumState>& state) {
  CoherenceReport report;
  report.num_pulses = hist.num_pulses;
  report.eta0 = eta_numeric(mode, 0.0);
  if (state && mean_photon_number(*state) > 0.0) report.g2q_analytic = g2q_from_moments(*state);

  const double clicks = static_cast<double>(stream.size());
  report.Ip.value = clicks;
  double sum_sq = 0.0;
  for (const auto& t : hist.pulse_tallies) {
    sum_sq += static_cast<double>(t.clicks) * static_cast<double>(t.clicks) * static_cast<double>(t.multiplicity);
  }
  if (hist.num_pulses > 0) {
    const double n = static_cast<double>(hist.num_pulses);
    const double mean = clicks / n;
    report.Ip.uncertainty = std::sqrt(std::max(0.0, n * (sum_sq / n - mean * mean)));
  }

  if (stream.empty()) {
    report.flags.push_back("empty_stream");
    return report;
  }
  report.D0 = estimate_D0(hist, mode);
  if (report.D0->undetermined) report.flags.push_back("no_same_pulse_pairs");
  report.g2p = g2p(stream, hist, mode);
  report.g2q_eta = recover_g2q_general(stream, hist, hist.num_pulses, mode);
  const double scale = static_cast<double>(hist.num_pulses) / report.eta0;
  report.g2p_scaled = Estimate{report.g2p->value * scale, report.g2p->uncertainty * scale,
                               report.g2p->undetermined};
  report.g2q_pn = pn_histogram_g2q(stream, hist.num_pulses);
  if (hist.total_pairs() >= 10) {
    try {
      report.fitted_width = fit_gaussian_width(hist).value;
    } catch (const EstimationError&) {
      report.flags.push_back("width_fit_failed");
    }
  }
  return report;
}

namespace {

void put(json& j, const char* key, const char* sigma_key, const std::optional<Estimate>& e) {
  if (!e) {
    j[key] = nullptr;
    j[sigma_key] = nullptr;
    return;
  }
  j[key] = e->value;
  if (std::isfinite(e->uncertainty)) {
    j[sigma_key] = e->uncertainty;
  } else {
    j[sigma_key] = nullptr;
  }
}

}  // namespace

std::string report_to_json(const CoherenceReport& r) {
  json j;
  j["g2q_analytic"] = r.g2q_analytic ? json(*r.g2q_analytic) : json(nullptr);
  put(j, "g2q_eta", "g2q_eta_sigma", r.g2q_eta);
  put(j, "g2q_pn", "g2q_pn_sigma", r.g2q_pn);
  put(j, "g2p", "g2p_sigma", r.g2p);
  put(j, "g2p_N_over_eta0", "g2p_N_over_eta0_sigma", r.g2p_scaled);
  put(j, "D0_per_second", "D0_sigma", r.D0);
  j["eta0_per_second"] = r.eta0;
  j["Ip"] = r.Ip.value;
  j["Ip_sigma"] = r.Ip.uncertainty;
  j["N"] = r.num_pulses;
  j["fitted_width_seconds"] = r.fitted_width ? json(*r.fitted_width) : json(nullptr);
  j["flags"] = r.flags;
  return j.dump(2) + "\n";
}

}  // namespace photocorr
