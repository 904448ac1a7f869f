#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"
#include "json.hpp"
#include "photocorr/errors.hpp"
#include "photocorr/estimate.hpp"
#include "photocorr/simulate.hpp"

using namespace photocorr;
using doctest::Approx;

namespace {

DetectorModel eff(double s) {
  DetectorModel d;
  d.efficiency = s;
  return d;
}

PulseTrainConfig train(std::uint64_t n, const TemporalMode& mode = TemporalMode::gaussian(1e-9),
                       double period = 12.5e-9) {
  return {n, period, mode};
}

ClickStream run(const QuantumState& state, double s, const PulseTrainConfig& t, std::uint64_t seed = 7) {
  return simulate_pulse_train(state, eff(s), t, seed);
}

TauHistogram same_pulse(const ClickStream& s, double w = 0.05e-9, double max_tau = 8e-9) {
  return tau_histogram(s, w, max_tau, PairingScope::same_pulse);
}

bool within(const Estimate& e, double target, double sigmas = 3.0) {
  return std::fabs(e.value - target) <= sigmas * e.uncertainty;
}

double combined(const Estimate& a, const Estimate& b) { return std::hypot(a.uncertainty, b.uncertainty); }

TemporalMode double_gaussian() {
  std::vector<double> t;
  std::vector<std::complex<double>> v;
  const double w = 0.4e-9;
  for (int i = 0; i <= 3000; ++i) {
    const double x = -3e-9 + 6e-9 * i / 3000;
    t.push_back(x);
    v.emplace_back(std::exp(-std::pow(x + 0.5e-9, 2) / (2 * w * w)) +
                   0.5 * std::exp(-std::pow(x - 0.9e-9, 2) / (2 * 0.6 * w * 0.6 * w)));
  }
  return TemporalMode::sampled(std::move(t), std::move(v));
}

// Histogram whose counts are the exact bin integrals of scale * eta.
TauHistogram analytic_histogram(double width, double bin_width, std::size_t bins, double scale) {
  TauHistogram h;
  h.bin_width = bin_width;
  h.num_pulses = 1;
  h.total_clicks = 1;
  const auto cdf = [&](double x) { return 0.5 * std::erfc(-x / (width * std::numbers::sqrt2)); };
  std::uint64_t total = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = bin_width * static_cast<double>(b);
    // Folded: unordered pairs of a density of total mass 1/2 over tau >= 0.
    const double mass = cdf(lo + bin_width) - cdf(lo);
    h.counts.push_back(static_cast<std::uint64_t>(std::llround(scale * mass)));
    total += h.counts.back();
  }
  h.pulse_tallies.push_back({1, total, h.counts[0], h.counts[1], 1});
  return h;
}

}  // namespace

TEST_SUITE("estimate") {

TEST_CASE("single photons give no same-pulse pairs") {
  const auto s = run(QuantumState::fock(1), 1.0, train(10000));
  const auto h = same_pulse(s);
  CHECK(h.total_pairs() == 0);
  CHECK(h.total_clicks == 10000);
  const auto d0 = estimate_D0(h, std::nullopt);
  CHECK(d0.value == 0.0);
  CHECK(d0.undetermined);
  CHECK(std::isinf(d0.uncertainty));
  CHECK(estimate_D0(h, TemporalMode::gaussian(1e-9)).undetermined);
  CHECK_THROWS_WITH_AS(recover_g2q_gaussian(s, h, 10000), doctest::Contains("recover_g2q_general"),
                       EstimationError);
}

TEST_CASE("same-pulse pair total matches the second factorial moment") {
  for (const auto& [state, s] : {std::pair{QuantumState::thermal(1.0), 1.0},
                                 std::pair{QuantumState::fock(3), 0.5}}) {
    const std::uint64_t n = 200000;
    const auto stream = run(state, s, train(n));
    const auto h = same_pulse(stream, 0.05e-9, 10e-9);
    // Pair count per pulse is k(k-1)/2; its spread sets the tolerance.
    const auto pn = click_number_histogram(stream, n);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < pn.size(); ++k) {
      const double p = 0.5 * k * (k - 1.0);
      m1 += p * pn[k];
      m2 += p * p * pn[k];
    }
    CHECK(m1 == Approx(static_cast<double>(h.total_pairs())));
    const double sd = std::sqrt((m2 / n - (m1 / n) * (m1 / n)) / n);
    const double expected = 0.5 * s * s * second_factorial_moment(state);
    CHECK(std::fabs(h.total_pairs() / double(n) - expected) < 5.0 * sd);
  }
}

TEST_CASE("histograms do not depend on the thread count") {
  const auto s = run(QuantumState::thermal(2.0), 0.5, train(50000));
  for (const auto scope : {PairingScope::same_pulse, PairingScope::all_pairs}) {
    const auto a = tau_histogram(s, 0.1e-9, 40e-9, scope, 1);
    const auto b = tau_histogram(s, 0.1e-9, 40e-9, scope, 4);
    CHECK(a.counts == b.counts);
    REQUIRE(a.pulse_tallies.size() == b.pulse_tallies.size());
    for (std::size_t i = 0; i < a.pulse_tallies.size(); ++i) {
      CHECK(a.pulse_tallies[i].clicks == b.pulse_tallies[i].clicks);
      CHECK(a.pulse_tallies[i].pairs == b.pulse_tallies[i].pairs);
      CHECK(a.pulse_tallies[i].multiplicity == b.pulse_tallies[i].multiplicity);
    }
  }
}

TEST_CASE("all-pairs and start-stop histograms match a brute-force count") {
  const auto s = run(QuantumState::coherent(1.5), 0.6, train(3000));
  const double w = 0.5e-9, max_tau = 40e-9;
  const std::size_t bins = 80;
  std::vector<std::uint64_t> all(bins, 0), adjacent(bins, 0), same(bins, 0);
  const auto& r = s.records;
  for (std::size_t a = 0; a < r.size(); ++a) {
    for (std::size_t b = a + 1; b < r.size(); ++b) {
      const double tau = r[b].time - r[a].time;
      if (tau >= w * bins) continue;
      const auto bin = std::min(bins - 1, static_cast<std::size_t>(tau / w));
      ++all[bin];
      if (b == a + 1) ++adjacent[bin];
      if (r[a].pulse_index == r[b].pulse_index) ++same[bin];
    }
  }
  CHECK(tau_histogram(s, w, max_tau, PairingScope::all_pairs).counts == all);
  CHECK(tau_histogram(s, w, max_tau, PairingScope::all_pairs, 1, true).counts == adjacent);
  CHECK(tau_histogram(s, w, max_tau, PairingScope::same_pulse).counts == same);
}

TEST_CASE("same-pulse pairing needs pulse indices") {
  const auto s = simulate_stationary_poisson(1e5, 0.01, DetectorModel{}, 2);
  CHECK_THROWS_AS(tau_histogram(s, 1e-7, 1e-5, PairingScope::same_pulse), EstimationError);
  ClickStream empty;
  const auto h = tau_histogram(empty, 1e-9, 1e-8, PairingScope::all_pairs);
  CHECK(h.empty());
  CHECK(h.num_bins() == 10);
}

TEST_CASE("fitted histogram width equals the pulse width") {
  const auto s = run(QuantumState::thermal(1.0), 1.0, train(1000000));
  const auto fit = fit_gaussian_width(same_pulse(s));
  CHECK(fit.value == Approx(1e-9).epsilon(0.02));
  CHECK(fit.uncertainty > 0.0);
}

TEST_CASE("D0 of an analytic histogram") {
  const double width = 1e-9, w = width / 20.0, scale = 1e13;
  const auto h = analytic_histogram(width, w, 160, scale);
  const double exact = scale * eta_gaussian(width, 0.0);
  CHECK(estimate_D0(h, TemporalMode::gaussian(width)).value == Approx(exact).epsilon(1e-6));
  // The two-bin estimate carries an O(w^4) residual bias.
  CHECK(estimate_D0(h, std::nullopt).value == Approx(exact).epsilon(1e-4));
}

TEST_CASE("Monte Carlo D0 matches the analytic density") {
  const std::uint64_t n = 1000000;
  const auto state = QuantumState::thermal(1.0);
  const auto s = run(state, 1.0, train(n));
  const auto h = same_pulse(s);
  const double target = analytic_D(state, eff(1.0), TemporalMode::gaussian(1e-9), n, 0.0);
  const auto fit = estimate_D0(h, TemporalMode::gaussian(1e-9));
  const auto central = estimate_D0(h, std::nullopt);
  CHECK(within(fit, target));
  CHECK(within(central, target));
  CHECK(fit.uncertainty < central.uncertainty);
}

TEST_CASE("total counts") {
  CHECK(total_counts(ClickStream{}) == 0.0);
  CHECK(total_counts(run(QuantumState::fock(1), 1.0, train(100))) == 100.0);
  const double c = total_counts(run(QuantumState::coherent(1.0), 0.3, train(1000000)));
  CHECK(std::fabs(c - 3e5) < 3.0 * std::sqrt(3e5));
}

TEST_CASE("g2p of coherent pulses") {
  const auto mode = TemporalMode::gaussian(1.0);
  const auto s = run(QuantumState::coherent(1.0), 1.0, train(10000, mode, 12.5));
  const auto h = same_pulse(s, 0.05, 8.0);
  const double expected = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * 1e4);
  CHECK(expected == Approx(3.99e-5).epsilon(1e-3));
  CHECK(within(g2p(s, h), expected));
  CHECK(within(g2p(s, h, mode), expected));
  CHECK_THROWS_AS(g2p(ClickStream{}, tau_histogram(ClickStream{}, 0.05, 8.0, PairingScope::same_pulse)),
                  EstimationError);
  CHECK_THROWS_AS(g2p(s, tau_histogram(s, 0.05, 8.0, PairingScope::all_pairs)), EstimationError);
}

TEST_CASE("g2p scales inversely with pulse count and width") {
  const auto state = QuantumState::thermal(1.0);
  const auto a = run(state, 0.8, train(100000), 11);
  const auto b = run(state, 0.8, train(200000), 12);
  const auto ga = g2p(a, same_pulse(a));
  const auto gb = g2p(b, same_pulse(b));
  const double ratio = gb.value / ga.value;
  const double ratio_sd = ratio * std::hypot(ga.uncertainty / ga.value, gb.uncertainty / gb.value);
  CHECK(std::fabs(ratio - 0.5) < 3.0 * ratio_sd);

  const auto half_width = TemporalMode::gaussian(0.5e-9);
  const auto narrow = run(state, 0.8, train(100000, half_width), 13);
  const auto gn = g2p(narrow, same_pulse(narrow, 0.025e-9, 4e-9));
  const double r2 = ga.value / gn.value;
  const double r2_sd = r2 * std::hypot(ga.uncertainty / ga.value, gn.uncertainty / gn.value);
  CHECK(std::fabs(r2 - 0.5) < 3.0 * r2_sd);
}

TEST_CASE("g2q recovery for Gaussian pulses") {
  const std::uint64_t n = 1000000;
  struct Case {
    QuantumState state;
    double s;
    double target;
    double tol;
  };
  for (const auto& c : {Case{QuantumState::thermal(0.5), 0.7, 2.0, 0.05},
                        Case{QuantumState::coherent(1.0), 0.7, 1.0, 0.03},
                        Case{QuantumState::fock(2), 0.6, 0.5, 0.03}}) {
    const auto s = run(c.state, c.s, train(n));
    const auto h = same_pulse(s);
    const auto known = recover_g2q_gaussian(s, h, n, 1e-9);
    const auto fitted = recover_g2q_gaussian(s, h, n);
    CHECK(std::fabs(known.value - c.target) < c.tol);
    CHECK(std::fabs(fitted.value - c.target) < c.tol);
    CHECK(known.uncertainty > 0.0);
    CHECK(recover_g2q_general(s, h, n, TemporalMode::gaussian(1e-9)).value ==
          Approx(known.value).epsilon(1e-8));
  }
}

TEST_CASE("g2q recovery for other mode shapes") {
  const std::uint64_t n = 1000000;
  const auto hg = TemporalMode::hermite_gauss(1, 0.5e-9);
  const auto s1 = run(QuantumState::thermal(1.0), 1.0, train(n, hg));
  const auto r1 = recover_g2q_general(s1, same_pulse(s1, 0.02e-9, 5e-9), n, hg);
  CHECK(std::fabs(r1.value - 2.0) < 0.1);

  const auto dg = double_gaussian();
  const auto s2 = run(QuantumState::coherent(1.0), 1.0, train(n, dg));
  const auto r2 = recover_g2q_general(s2, same_pulse(s2, 0.02e-9, 6e-9), n, dg);
  CHECK(std::fabs(r2.value - 1.0) < 0.05);
}

TEST_CASE("photon-number histogram g2q") {
  const std::uint64_t n = 1000000;
  const auto f1 = pn_histogram_g2q(run(QuantumState::fock(1), 0.4, train(n)), n);
  CHECK(f1.value == 0.0);
  CHECK(f1.uncertainty <= 0.01);
  CHECK(std::fabs(pn_histogram_g2q(run(QuantumState::thermal(1.0), 0.3, train(n)), n).value - 2.0) < 0.05);
  CHECK(std::fabs(pn_histogram_g2q(run(QuantumState::coherent(2.0), 0.5, train(n)), n).value - 1.0) < 0.02);

  CHECK_THROWS_AS(pn_histogram_g2q(ClickStream{}, n), EstimationError);
  CHECK_THROWS_AS(pn_histogram_g2q(simulate_stationary_poisson(1e4, 0.01, DetectorModel{}, 1), 10),
                  EstimationError);
  const auto small = run(QuantumState::coherent(3.0), 1.0, train(100));
  CHECK_THROWS_AS(pn_histogram_g2q(small, 10), EstimationError);
  const auto counts = click_number_histogram(small, 100);
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  CHECK(total == 100);
}

TEST_CASE("side-peak normalization") {
  const std::uint64_t n = 1000000;
  const auto t = train(n);
  const double window = t.repetition_period / 2.0;
  const auto coh = g2_sidepeak(run(QuantumState::coherent(1.0), 0.5, t), t, window);
  CHECK(std::fabs(coh.value - 1.0) < 0.02);
  const auto th = g2_sidepeak(run(QuantumState::thermal(1.0), 0.5, t), t, window);
  CHECK(std::fabs(th.value - 2.0) < 0.05);
  const auto single = g2_sidepeak(run(QuantumState::fock(1), 0.5, t), t, window);
  CHECK(single.value == 0.0);
  CHECK(single.uncertainty <= 0.01);

  const auto small = run(QuantumState::coherent(1.0), 1.0, train(3));
  CHECK_THROWS_AS(g2_sidepeak(small, train(3), window, 3), EstimationError);
  CHECK_THROWS_AS(g2_sidepeak(small, train(3), 0.6 * t.repetition_period, 1), ConfigError);
  CHECK_THROWS_AS(g2_sidepeak(small, train(3), window, 0), ConfigError);
}

TEST_CASE("D0 closure against the photon-number estimate") {
  const std::uint64_t n = 1000000;
  const double eta0 = eta_gaussian(1e-9, 0.0);
  for (const auto& state : {QuantumState::thermal(1.0), QuantumState::coherent(1.0), QuantumState::fock(2)}) {
    const auto s = run(state, 0.5, train(n), 21);
    const auto h = same_pulse(s);
    for (const auto& hint : {std::optional<TemporalMode>{}, std::optional{TemporalMode::gaussian(1e-9)}}) {
      const auto g = g2p(s, h, hint);
      const Estimate scaled{g.value * n / eta0, g.uncertainty * n / eta0};
      const auto pn = pn_histogram_g2q(s, n);
      CHECK(std::fabs(scaled.value - pn.value) < 3.0 * combined(scaled, pn));
    }
    // g2p N / eta(0) and the general recovery are the same number.
    const auto mode = TemporalMode::gaussian(1e-9);
    CHECK(g2p(s, h, mode).value * n / eta_numeric(mode, 0.0) ==
          Approx(recover_g2q_general(s, h, n, mode).value).epsilon(1e-12));
  }
}

TEST_CASE("histogram agrees with the analytic pair density") {
  const std::uint64_t n = 300000;
  const auto state = QuantumState::thermal(1.0);
  const auto mode = TemporalMode::gaussian(1e-9);
  const auto s = run(state, 0.9, train(n, mode), 31);
  const auto h = same_pulse(s, 0.1e-9, 6e-9);
  const auto expected = expected_pair_counts(state, eff(0.9), mode, n, h.bin_width, h.num_bins());
  double chi2 = 0.0;
  int dof = 0;
  for (std::size_t b = 0; b < h.num_bins(); ++b) {
    const double e = expected[b];
    const double d = static_cast<double>(h.counts[b]) - e;
    CHECK(std::fabs(d) <= 5.0 * std::sqrt(std::max(e, 1.0)) + 1.0);
    if (e >= 5.0) {
      chi2 += d * d / e;
      ++dof;
    }
  }
  REQUIRE(dof > 20);
  const double p = boost::math::gamma_q(dof / 2.0, chi2 / 2.0);
  CHECK(p > 0.01);
}

TEST_CASE("g2q estimates order the states") {
  const std::uint64_t n = 1000000;
  const auto mode = TemporalMode::gaussian(1e-9);
  std::vector<Estimate> est;
  for (const auto& state : {QuantumState::fock(2), QuantumState::coherent(1.0), QuantumState::thermal(1.0)}) {
    const auto s = run(state, 0.5, train(n), 41);
    est.push_back(recover_g2q_general(s, same_pulse(s), n, mode));
  }
  for (std::size_t i = 0; i + 1 < est.size(); ++i) {
    CHECK(est[i + 1].value - est[i].value > combined(est[i], est[i + 1]));
  }
}

TEST_CASE("stationary conditional probability") {
  CHECK_THROWS_AS(stationary_conditional_probability(ClickStream{}, 1e-8, 1e-6), EstimationError);
  const auto s = simulate_stationary_poisson(1e6, 1.0, DetectorModel{}, 5);
  const auto curve = stationary_conditional_probability(s, 2e-8, 1e-6);
  CHECK(curve.tau.size() == 50);
  CHECK(curve.baseline == Approx(static_cast<double>(s.size()) / s.duration()));
  CHECK(std::fabs(curve.peak_ratio.value - 1.0) < 0.03);
  CHECK(std::fabs(curve.tail_ratio.value - 1.0) < 0.03);
  for (double g : curve.g2) CHECK(std::fabs(g - 1.0) < 0.05);
  CHECK(curve.peak_ratio.uncertainty > 0.0);

  StationaryOptions opts;
  opts.start_stop = true;
  const auto adjacent = stationary_conditional_probability(s, 2e-8, 1e-6, opts);
  // Adjacent pairs decay as exp(-rate tau) for a Poisson process.
  CHECK(adjacent.g2.back() < adjacent.g2.front());
  CHECK(adjacent.g2.back() / adjacent.g2.front() == Approx(std::exp(-1e6 * 0.98e-6)).epsilon(0.05));
}

TEST_CASE("report fields and JSON") {
  const std::uint64_t n = 200000;
  const auto state = QuantumState::thermal(1.0);
  const auto mode = TemporalMode::gaussian(1e-9);
  const auto s = run(state, 0.5, train(n, mode));
  const auto h = same_pulse(s);
  const auto r = build_report(s, h, mode, state);
  REQUIRE(r.g2q_eta);
  REQUIRE(r.g2p);
  REQUIRE(r.g2q_pn);
  REQUIRE(r.D0);
  CHECK(*r.g2q_analytic == Approx(2.0));
  CHECK(r.g2q_eta->uncertainty > 0.0);
  CHECK(r.g2q_pn->uncertainty > 0.0);
  CHECK(r.Ip.uncertainty > 0.0);
  CHECK(std::fabs(r.g2p->value - r.g2q_eta->value * r.eta0 / n) <= r.g2p->uncertainty);
  CHECK(r.fitted_width.has_value());
  CHECK(r.flags.empty());

  const auto j = nlohmann::json::parse(report_to_json(r));
  for (const char* key : {"g2q_analytic", "g2q_eta", "g2q_pn", "g2p", "eta0_per_second", "Ip", "N",
                          "D0_per_second", "g2q_eta_sigma", "g2q_pn_sigma", "g2p_sigma", "D0_sigma",
                          "Ip_sigma"}) {
    CHECK_MESSAGE(j.contains(key), key);
  }
  CHECK(j["N"].get<std::uint64_t>() == n);
  CHECK(j["eta0_per_second"].get<double>() == Approx(1.0 / (std::sqrt(2.0 * std::numbers::pi) * 1e-9)));
}

TEST_CASE("report of an empty stream") {
  ClickStream empty;
  empty.metadata.pulsed = PulsedRunInfo{1000, 12.5e-9};
  const auto h = same_pulse(empty);
  const auto r = build_report(empty, h, TemporalMode::gaussian(1e-9));
  CHECK(std::find(r.flags.begin(), r.flags.end(), "empty_stream") != r.flags.end());
  CHECK_FALSE(r.g2p.has_value());
  const auto j = nlohmann::json::parse(report_to_json(r));
  CHECK(j["g2p"].is_null());
  CHECK(j["Ip"].get<double>() == 0.0);
  CHECK(j["N"].get<std::uint64_t>() == 1000);
}

}  // TEST_SUITE
