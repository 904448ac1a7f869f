#include "photocorr/selftest.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <tuple>

#include <boost/math/special_functions/gamma.hpp>

#include "photocorr/estimate.hpp"
#include "photocorr/numeric.hpp"
#include "photocorr/simulate.hpp"
#include "photocorr/states.hpp"

namespace photocorr {

namespace {

constexpr double kWidth = 1e-9;
constexpr double kPeriod = 12.5e-9;
constexpr std::uint64_t kFullPulses = 1'000'000;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string est(const Estimate& e) { return num(e.value) + " +- " + num(e.uncertainty); }

double rel_diff(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

struct Checker {
  CriterionResult& result;
  void operator()(bool ok, const std::string& what) const {
    result.details.push_back((ok ? "ok   " : "FAIL ") + what);
    if (!ok) result.passed = false;
  }
};

struct Context {
  AcceptanceOptions opt;
  std::uint64_t pulses(std::uint64_t full) const {
    return std::max<std::uint64_t>(1000, static_cast<std::uint64_t>(std::llround(static_cast<double>(full) * opt.scale)));
  }
  double widen() const { return opt.scale < 1.0 ? 1.0 / std::sqrt(opt.scale) : 1.0; }
  std::uint64_t seed(std::uint64_t salt) const { return mix64(opt.seed ^ (salt * 0x9E3779B97F4A7C15ULL)); }
};

PulseTrainConfig train_of(std::uint64_t n, double width = kWidth) {
  PulseTrainConfig t{n, kPeriod, TemporalMode::gaussian(width)};
  t.validate();
  return t;
}

DetectorModel detector_of(double efficiency) {
  DetectorModel d;
  d.efficiency = efficiency;
  return d;
}

TauHistogram same_pulse_hist(const ClickStream& s, double width, unsigned threads) {
  return tau_histogram(s, width / 20.0, 8.0 * width, PairingScope::same_pulse, threads);
}

// 1 ---------------------------------------------------------------------------

void criterion1(const Context& ctx, Checker& check) {
  const auto t0 = Clock::now();
  const auto mode = TemporalMode::gaussian(kWidth);

  double worst = 0.0;
  for (int i = -100; i <= 100; ++i) {
    const double tau = 5.0 * kWidth * i / 100.0;
    worst = std::max(worst, rel_diff(eta_numeric(mode, tau), eta_gaussian(kWidth, tau)));
  }
  check(worst <= 1e-8, "eta quadrature vs closed form over +-5 widths: max rel " + num(worst) + " <= 1e-8");

  const auto det = detector_of(0.5);
  const std::uint64_t n = 1'000'000;
  const std::array states{QuantumState::thermal(0.5), QuantumState::coherent(1.0), QuantumState::fock(2),
                          QuantumState::mixture({{0.3, QuantumState::thermal(2.0)}, {0.7, QuantumState::fock(1)}})};
  worst = 0.0;
  for (const auto& st : states) {
    const double ip = analytic_Ip(st, det, n);
    const double g2q = g2q_from_moments(st);
    for (int i = -50; i <= 50; ++i) {
      const double tau = 5.0 * kWidth * i / 50.0;
      const double rhs = ip * ip * g2q * eta_numeric(mode, tau) / static_cast<double>(n);
      worst = std::max(worst, rel_diff(analytic_D(st, det, mode, n, tau), rhs));
    }
  }
  check(worst <= 1e-10, "D(tau) == Ip^2 g2q eta(tau) / N: max rel " + num(worst) + " <= 1e-10");

  // g2p = g2q eta(0)/N with the Gaussian eta(0) = 1/(sqrt(2 pi) w).
  worst = 0.0;
  for (const auto& st : states) {
    const double ip = analytic_Ip(st, det, n);
    const double g2p_value = analytic_D(st, det, mode, n, 0.0) / (ip * ip);
    const double via_width =
        g2q_from_moments(st) / (std::sqrt(2.0 * std::numbers::pi) * kWidth * static_cast<double>(n));
    worst = std::max(worst, rel_diff(g2p_value, via_width));
  }
  check(worst <= 1e-12, "analytic g2p == g2q / (sqrt(2 pi) w N): max rel " + num(worst) + " <= 1e-12");

  const std::uint64_t n_sim = 20000;
  const auto train = train_of(n_sim);
  const auto stream = simulate_pulse_train(QuantumState::thermal(1.0), detector_of(1.0), train, ctx.seed(1));
  const auto hist = same_pulse_hist(stream, kWidth, 1);
  const double eta0 = eta_numeric(mode, 0.0);
  const auto p = g2p(stream, hist, mode);
  const auto general = recover_g2q_general(stream, hist, n_sim, mode);
  const auto gauss = recover_g2q_gaussian(stream, hist, n_sim, kWidth);
  const double d1 = rel_diff(p.value * static_cast<double>(n_sim) / eta0, general.value);
  const double d2 = rel_diff(gauss.value, general.value);
  check(d1 <= 1e-12, "estimated g2p N / eta(0) == general recovery: rel " + num(d1) + " <= 1e-12");
  check(d2 <= 1e-12, "Gaussian recovery == general recovery for a Gaussian mode: rel " + num(d2) + " <= 1e-12");

  const double elapsed = seconds_since(t0);
  check(elapsed < 1.0, "runtime " + num(elapsed) + " s < 1 s");
}

// 2 ---------------------------------------------------------------------------

void criterion2(const Context& ctx, Checker& check) {
  struct Case {
    const char* name;
    QuantumState state;
    double target;
    double lo;
    double hi;
  };
  const double k = ctx.widen();
  const std::array cases{
      Case{"thermal(0.5)", QuantumState::thermal(0.5), 2.0, 0.05 * k, 0.05 * k},
      Case{"coherent(1)", QuantumState::coherent(1.0), 1.0, 0.03 * k, 0.03 * k},
      Case{"fock(2)", QuantumState::fock(2), 0.5, 0.03 * k, 0.03 * k},
      Case{"fock(1)", QuantumState::fock(1), 0.0, 0.0, 0.01 * k},
  };
  const std::uint64_t n = ctx.pulses(kFullPulses);
  const auto train = train_of(n);
  std::uint64_t salt = 20;
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    const auto stream = simulate_pulse_train(c.state, detector_of(0.5), train, ctx.seed(++salt), ctx.opt.threads);
    const auto hist = same_pulse_hist(stream, kWidth, ctx.opt.threads);
    const auto eta = recover_g2q_gaussian(stream, hist, n, kWidth);
    const auto pn = pn_histogram_g2q(stream, train);
    const double elapsed = seconds_since(t0);
    const auto in_band = [&](const Estimate& e) {
      return e.value >= c.target - c.lo - 1e-12 && e.value <= c.target + c.hi;
    };
    const std::string band = " in [" + num(c.target - c.lo) + ", " + num(c.target + c.hi) + "]";
    check(in_band(eta), std::string(c.name) + " recover_g2q_gaussian " + est(eta) + band);
    check(in_band(pn), std::string(c.name) + " pn_histogram_g2q " + est(pn) + band);
    check(elapsed < 60.0, std::string(c.name) + " runtime " + num(elapsed) + " s < 60 s");
  }
}

// 3 ---------------------------------------------------------------------------

void criterion3(const Context& ctx, Checker& check) {
  const std::uint64_t n = ctx.pulses(kFullPulses);
  const auto train = train_of(n);
  const auto stream = simulate_pulse_train(QuantumState::thermal(1.0), detector_of(1.0), train, ctx.seed(30),
                                           ctx.opt.threads);
  const auto hist = same_pulse_hist(stream, kWidth, ctx.opt.threads);
  const auto w = fit_gaussian_width(hist);
  const double rel = std::fabs(w.value / kWidth - 1.0);
  const double tol = 0.02 * ctx.widen();
  check(rel <= tol, "fitted s.d. " + est(w) + " s vs 1e-9 s: rel " + num(rel) + " <= " + num(tol));
}

// 4 ---------------------------------------------------------------------------

struct PulsedRun {
  Estimate g2p;    // D(0) from the fitted mode shape
  Estimate local;  // D(0) from the first two bins only
  Estimate scaled;
  Estimate pn;
  double eta0 = 0.0;
};

PulsedRun pulsed_run(const Context& ctx, std::uint64_t n, double width, std::uint64_t salt) {
  const auto train = train_of(n, width);
  const auto stream = simulate_pulse_train(QuantumState::thermal(1.0), detector_of(1.0), train, ctx.seed(salt),
                                           ctx.opt.threads);
  const auto hist = same_pulse_hist(stream, width, ctx.opt.threads);
  PulsedRun r;
  r.eta0 = eta_numeric(train.mode, 0.0);
  r.g2p = g2p(stream, hist, train.mode);
  r.local = g2p(stream, hist);
  r.scaled = {r.g2p.value * static_cast<double>(n) / r.eta0, r.g2p.uncertainty * static_cast<double>(n) / r.eta0};
  r.pn = pn_histogram_g2q(stream, train);
  return r;
}

double rel_sigma(const Estimate& e) { return e.uncertainty / std::fabs(e.value); }

void criterion4(const Context& ctx, Checker& check) {
  const std::array<std::uint64_t, 3> sizes{1000, 10000, 100000};
  std::array<PulsedRun, 3> runs;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto n = sizes[i];
    runs[i] = pulsed_run(ctx, n, kWidth, 40 + i);
    const auto& r = runs[i];
    const double sigma = std::hypot(r.scaled.uncertainty, r.pn.uncertainty);
    const std::string tag = "N=" + std::to_string(n) + ": ";
    check(std::fabs(r.scaled.value - r.pn.value) <= 3.0 * sigma,
          tag + "g2p N/eta0 " + est(r.scaled) + " vs pn g2q " + est(r.pn) + " within 3 sigma");
    // The two-bin D(0) does not use the mode shape, so it tests eta(0) itself.
    const double ratio = r.local.value / r.pn.value;
    const double expected = r.eta0 / static_cast<double>(n);
    const double ratio_sigma = ratio * std::hypot(rel_sigma(r.local), rel_sigma(r.pn));
    check(std::fabs(ratio - expected) <= 3.0 * ratio_sigma,
          tag + "two-bin g2p/g2q " + num(ratio) + " vs eta0/N " + num(expected) + " within 3 sigma (" +
              num(ratio_sigma) + ")");
    check(std::fabs(r.g2p.value - r.pn.value) > 10.0 * (r.g2p.uncertainty + r.pn.uncertainty),
          tag + "raw g2p " + num(r.g2p.value) + " /s is distinct from g2q " + num(r.pn.value));
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (std::size_t j = i + 1; j < sizes.size(); ++j) {
      const double ratio = runs[i].g2p.value / runs[j].g2p.value;
      const double expected = static_cast<double>(sizes[j]) / static_cast<double>(sizes[i]);
      const double sigma = ratio * std::hypot(rel_sigma(runs[i].g2p), rel_sigma(runs[j].g2p));
      check(std::fabs(ratio - expected) <= 3.0 * sigma,
            "g2p(N=" + std::to_string(sizes[i]) + ")/g2p(N=" + std::to_string(sizes[j]) + ") " + num(ratio) +
                " vs " + num(expected) + " within 3 sigma (" + num(sigma) + ")");
    }
  }
  const auto wide = pulsed_run(ctx, 100000, kWidth, 50);
  const auto narrow = pulsed_run(ctx, 100000, 0.5 * kWidth, 51);
  const double ratio = narrow.local.value / wide.local.value;
  const double sigma = ratio * std::hypot(rel_sigma(narrow.local), rel_sigma(wide.local));
  check(std::fabs(ratio - 2.0) <= 3.0 * sigma,
        "halving the width: two-bin g2p ratio " + num(ratio) + " vs 2 within 3 sigma (" + num(sigma) + ")");
}

// 5 ---------------------------------------------------------------------------

void criterion5(const Context& ctx, Checker& check) {
  constexpr double kBandwidth = 1e6;
  constexpr double kRate = 1e6;
  const double duration = 2.0 * std::min(1.0, ctx.opt.scale);
  const double k = ctx.widen();
  const double bin = 1.0 / (50.0 * kBandwidth);
  const double max_tau = 10.0 / kBandwidth;

  auto t0 = Clock::now();
  StationaryThermalConfig cfg{kRate, kBandwidth, duration, 0.0, Lineshape::gaussian};
  const auto thermal = simulate_stationary_thermal(cfg, detector_of(1.0), ctx.seed(60), ctx.opt.threads);
  const auto curve = stationary_conditional_probability(thermal, bin, max_tau);
  double elapsed = seconds_since(t0);
  check(std::fabs(curve.peak_ratio.value - 2.0) <= 0.05 * k,
        "thermal peak/baseline " + est(curve.peak_ratio) + " in 2 +- " + num(0.05 * k));
  check(std::fabs(curve.tail_ratio.value - 1.0) <= 0.03 * k,
        "thermal long-tau ratio " + est(curve.tail_ratio) + " in 1 +- " + num(0.03 * k));
  const double fwhm = curve.peak_fwhm * kBandwidth;
  check(fwhm >= 0.5 && fwhm <= 2.0, "thermal peak FWHM " + num(fwhm) + " / bandwidth in [0.5, 2]");
  check(elapsed < 60.0, "thermal runtime " + num(elapsed) + " s < 60 s");

  t0 = Clock::now();
  const auto poisson = simulate_stationary_poisson(kRate, duration, detector_of(1.0), ctx.seed(61));
  const auto flat = stationary_conditional_probability(poisson, bin, max_tau);
  elapsed = seconds_since(t0);
  double worst = 0.0;
  for (const double g : flat.g2) worst = std::max(worst, std::fabs(g - 1.0));
  check(std::fabs(flat.peak_ratio.value - 1.0) <= 0.03 * k,
        "Poisson peak/baseline " + est(flat.peak_ratio) + " in 1 +- " + num(0.03 * k));
  check(std::fabs(flat.tail_ratio.value - 1.0) <= 0.03 * k,
        "Poisson long-tau ratio " + est(flat.tail_ratio) + " in 1 +- " + num(0.03 * k));
  check(worst <= 0.03 * k, "Poisson curve flat: max |g2 - 1| over all bins " + num(worst) + " <= " + num(0.03 * k));
  check(elapsed < 60.0, "Poisson runtime " + num(elapsed) + " s < 60 s");
}

// 6 ---------------------------------------------------------------------------

TemporalMode skewed_sampled_mode() {
  // Asymmetric smooth pulse on a fine grid.
  constexpr double sigma = 0.4e-9;
  constexpr int n = 4001;
  std::vector<double> t(n);
  std::vector<std::complex<double>> v(n);
  for (int i = 0; i < n; ++i) {
    t[i] = -8.0 * sigma + 16.0 * sigma * i / (n - 1);
    const double x = t[i] / sigma;
    v[i] = std::exp(-0.5 * x * x) * (1.0 + 0.6 * std::tanh(x)) * std::polar(1.0, 0.3 * x);
  }
  return TemporalMode::sampled(std::move(t), std::move(v));
}

void criterion6(const Context& ctx, Checker& check) {
  // Loss invariance, analytic.
  const std::array states{QuantumState::thermal(0.7), QuantumState::coherent(2.0), QuantumState::fock(3),
                          QuantumState::mixture({{0.5, QuantumState::thermal(1.5)}, {0.5, QuantumState::fock(2)}})};
  double worst = 0.0;
  for (const auto& st : states) {
    for (const double s : {0.1, 0.5, 0.9}) {
      const auto thinned = binomial_thinning(st.distribution(), s);
      worst = std::max(worst, rel_diff(g2q_from_pn(thinned), g2q_from_moments(st)));
    }
  }
  check(worst <= 1e-10, "g2q invariant under binomial loss (4 states x 3 efficiencies): max rel " + num(worst));

  // Loss invariance, Monte Carlo.
  const std::uint64_t n = ctx.pulses(kFullPulses);
  for (const auto& [st, target, salt] : {std::tuple{QuantumState::thermal(1.0), 2.0, 70},
                                         std::tuple{QuantumState::coherent(2.0), 1.0, 71}}) {
    const auto train = train_of(n);
    const auto stream = simulate_pulse_train(st, detector_of(0.3), train, ctx.seed(salt), ctx.opt.threads);
    const auto pn = pn_histogram_g2q(stream, train);
    check(std::fabs(pn.value - target) <= 3.0 * pn.uncertainty,
          st.spec() + " at s=0.3: pn g2q " + est(pn) + " within 3 sigma of " + num(target));
  }

  // eta normalization, peak dominance, symmetry.
  const std::array modes{TemporalMode::gaussian(kWidth), TemporalMode::hermite_gauss(1, kWidth),
                         TemporalMode::hermite_gauss(2, 0.7 * kWidth), skewed_sampled_mode()};
  for (const auto& mode : modes) {
    const auto [a, b] = mode.support();
    const double half = b - a;
    constexpr int steps = 2000;
    const double integral =
        numeric::simpson([&](double tau) { return eta_numeric(mode, tau); }, -half, half, steps);
    check(std::fabs(integral - 1.0) <= 1e-6, mode.spec() + ": |integral of eta - 1| " + num(std::fabs(integral - 1.0)) + " <= 1e-6");
    const double peak = eta_numeric(mode, 0.0);
    double asym = 0.0;
    bool dominant = true;
    for (int i = 1; i <= steps / 2; ++i) {
      const double tau = 2.0 * half * i / steps;
      const double plus = eta_numeric(mode, tau);
      asym = std::max(asym, std::fabs(plus - eta_numeric(mode, -tau)) / peak);
      dominant = dominant && plus <= peak * (1.0 + 1e-12);
    }
    check(dominant, mode.spec() + ": eta(tau) <= eta(0)");
    check(asym <= 1e-9, mode.spec() + ": |eta(tau) - eta(-tau)| / eta(0) " + num(asym) + " <= 1e-9");
  }

  // Determinism.
  {
    const auto train = train_of(100000);
    const auto st = QuantumState::thermal(1.0);
    DetectorModel det = detector_of(0.6);
    det.timing_jitter_sigma = 50e-12;
    det.dead_time = 0.3e-9;
    const auto a = simulate_pulse_train(st, det, train, ctx.seed(80), 1);
    const auto b = simulate_pulse_train(st, det, train, ctx.seed(80), 1);
    const auto c = simulate_pulse_train(st, det, train, ctx.seed(80), 4);
    const auto d = simulate_pulse_train(st, det, train, ctx.seed(81), 1);
    check(a.records == b.records, "pulsed rerun with the same seed is bit-identical");
    check(a.records == c.records, "pulsed run with 1 and 4 threads is bit-identical");
    check(a.records != d.records, "a different seed gives a different pulsed stream");
    StationaryThermalConfig cfg{1e6, 1e6, 0.005, 0.0, Lineshape::gaussian};
    const auto s1 = simulate_stationary_thermal(cfg, detector_of(1.0), ctx.seed(82), 1);
    const auto s4 = simulate_stationary_thermal(cfg, detector_of(1.0), ctx.seed(82), 4);
    check(!s1.empty() && s1.records == s4.records, "stationary run with 1 and 4 threads is bit-identical");
    const auto h1 = tau_histogram(a, kWidth / 20.0, 8.0 * kWidth, PairingScope::same_pulse, 1);
    const auto h4 = tau_histogram(a, kWidth / 20.0, 8.0 * kWidth, PairingScope::same_pulse, 4);
    check(h1.counts == h4.counts, "histogram with 1 and 4 threads is identical");
  }

  // fock(2): the two arrival times are independent draws from |v|^2.
  {
    constexpr int bins = 16;
    const std::uint64_t pulses = ctx.pulses(200000);
    const auto train = train_of(pulses);
    const auto stream = simulate_pulse_train(QuantumState::fock(2), detector_of(1.0), train, ctx.seed(90),
                                             ctx.opt.threads);
    // Equal-probability bins of the intensity N(0, w^2/2).
    std::array<double, bins - 1> edges;
    for (int i = 1; i < bins; ++i) {
      edges[i - 1] = kWidth * std::numbers::sqrt2 / 2.0 * numeric::inverse_normal_cdf(static_cast<double>(i) / bins);
    }
    const auto bin_of = [&](double t) {
      return static_cast<int>(std::upper_bound(edges.begin(), edges.end(), t) - edges.begin());
    };
    std::vector<double> observed(bins * bins, 0.0);
    std::uint64_t used = 0;
    const auto& r = stream.records;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      if (r[i].pulse_index != r[i + 1].pulse_index) continue;
      const double centre = (static_cast<double>(r[i].pulse_index) + 0.5) * kPeriod;
      const int x = bin_of(r[i].time - centre);
      const int y = bin_of(r[i + 1].time - centre);
      ++observed[std::min(x, y) * bins + std::max(x, y)];
      ++used;
      ++i;
    }
    double chi2 = 0.0;
    int cells = 0;
    const double p = 1.0 / bins;
    for (int x = 0; x < bins; ++x) {
      for (int y = x; y < bins; ++y) {
        const double expected = static_cast<double>(used) * p * p * (x == y ? 1.0 : 2.0);
        const double diff = observed[x * bins + y] - expected;
        chi2 += diff * diff / expected;
        ++cells;
      }
    }
    const int dof = cells - 1;
    const double p_value = boost::math::gamma_q(0.5 * dof, 0.5 * chi2);
    check(used == pulses, "every fock(2) pulse at s=1 yields two clicks (" + std::to_string(used) + ")");
    check(p_value > 0.01, "fock(2) joint arrival times factorize: chi2 " + num(chi2) + " on " +
                              std::to_string(dof) + " dof, p " + num(p_value) + " > 0.01");
  }
}

// 7 ---------------------------------------------------------------------------

void criterion7(const Context& ctx, Checker& check) {
  const std::uint64_t n = ctx.pulses(kFullPulses);
  const auto train = train_of(n);
  std::uint64_t salt = 100;
  for (const auto& st : {QuantumState::coherent(1.0), QuantumState::thermal(1.0), QuantumState::fock(1)}) {
    const auto stream = simulate_pulse_train(st, detector_of(0.5), train, ctx.seed(++salt), ctx.opt.threads);
    const auto g = g2_sidepeak(stream, train, 0.5 * kPeriod, 3);
    const double target = g2q_from_moments(st);
    check(std::fabs(g.value - target) <= 3.0 * g.uncertainty,
          st.spec() + " side-peak g2 " + est(g) + " within 3 sigma of " + num(target));
  }
}

constexpr std::array<const char*, 7> kTitles{
    "analytic identities",
    "state identification end to end",
    "pulse-shape law of D(tau)",
    "g2p vs g2q and its scalings",
    "stationary baseline",
    "property suites",
    "side-peak estimator",
};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  CriterionResult result;
  result.id = id;
  result.title = (id >= 1 && id <= 7) ? kTitles[static_cast<std::size_t>(id - 1)] : "unknown";
  Checker check{result};
  const Context ctx{options};
  const auto t0 = Clock::now();
  try {
    switch (id) {
      case 1: criterion1(ctx, check); break;
      case 2: criterion2(ctx, check); break;
      case 3: criterion3(ctx, check); break;
      case 4: criterion4(ctx, check); break;
      case 5: criterion5(ctx, check); break;
      case 6: criterion6(ctx, check); break;
      case 7: criterion7(ctx, check); break;
      default: check(false, "no criterion " + std::to_string(id));
    }
  } catch (const std::exception& e) {
    check(false, std::string("exception: ") + e.what());
  }
  result.seconds = seconds_since(t0);
  return result;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 7; ++id) out.push_back(run_criterion(id, options));
  return out;
}

void print_result(const CriterionResult& result, std::ostream& out, bool verbose) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", result.seconds);
  out << (result.passed ? "PASS" : "FAIL") << " criterion " << result.id << ": " << result.title << " (" << secs
      << " s)\n";
  if (verbose || !result.passed) {
    for (const auto& d : result.details) out << "    " << d << '\n';
  }
}

}  // namespace photocorr
