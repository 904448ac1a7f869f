#include "photocorr/modes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include "photocorr/errors.hpp"
#include "photocorr/numeric.hpp"
#include "photocorr/text.hpp"

namespace photocorr {

namespace {

// Parametric quadrature grid: center +/- kHalfSpan widths, step width/200.
constexpr double kHalfSpan = 8.0;
constexpr double kStepsPerWidth = 200.0;
// Sub-steps per grid spacing for sampled modes.
constexpr double kSampledSubsteps = 8.0;

// Orthonormal Hermite function psi_j(x) via the stable three-term recurrence.
double hermite_function(std::uint32_t order, double x) {
  double prev = 0.0;
  double cur = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
  for (std::uint32_t k = 0; k < order; ++k) {
    const double kk = k;
    const double next = std::sqrt(2.0 / (kk + 1.0)) * x * cur - std::sqrt(kk / (kk + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void require_width(double width) {
  if (!std::isfinite(width) || width <= 0.0) throw DomainError("mode width must be > 0");
}

}  // namespace

TemporalMode TemporalMode::gaussian(double width, double center) {
  TemporalMode m = hermite_gauss(0, width, center);
  m.kind_ = Kind::gaussian;
  return m;
}

TemporalMode TemporalMode::hermite_gauss(std::uint32_t order, double width, double center) {
  require_width(width);
  if (!std::isfinite(center)) throw DomainError("mode center must be finite");
  TemporalMode m;
  m.kind_ = Kind::hermite_gauss;
  m.order_ = order;
  m.width_ = width;
  m.center_ = center;
  // The oscillatory part extends to about sqrt(2j+1) widths.
  const double half = (kHalfSpan + std::sqrt(2.0 * order + 1.0) - 1.0) * width;
  m.support_ = {center - half, center + half};
  // Cramer's bound |psi_j| <= pi^{-1/4}.
  m.peak_bound_ = 1.0 / (std::sqrt(std::numbers::pi) * width);
  m.step_ = width / kStepsPerWidth;
  m.finish();
  return m;
}

TemporalMode TemporalMode::sampled(std::vector<double> times,
                                   std::vector<std::complex<double>> amplitudes,
                                   std::string source_path) {
  if (times.size() != amplitudes.size()) throw DomainError("sampled mode: times and amplitudes differ in length");
  if (times.size() < 3) throw DomainError("sampled mode needs at least 3 samples");
  const double step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("sampled mode: times must increase");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double d = times[i] - times[i - 1];
    if (std::fabs(d - step) > 1e-6 * step) throw DomainError("sampled mode grid is not uniform");
  }
  for (const auto& a : amplitudes) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw DomainError("sampled mode has non-finite amplitude");
  }

  TemporalMode m;
  m.kind_ = Kind::sampled;
  m.source_path_ = std::move(source_path);
  m.grid_start_ = times.front();
  m.grid_step_ = step;
  m.samples_ = std::make_shared<const std::vector<std::complex<double>>>(std::move(amplitudes));
  m.support_ = {times.front(), times.back()};
  m.step_ = step / kSampledSubsteps;

  // |linear interpolant|^2 is quadratic on each cell, so Simpson with the
  // cell midpoint is exact.
  double norm = 0.0;
  const auto& s = *m.samples_;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double a = std::norm(s[i]);
    const double b = std::norm(s[i + 1]);
    const double mid = std::norm(0.5 * (s[i] + s[i + 1]));
    norm += step / 6.0 * (a + 4.0 * mid + b);
  }
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("sampled mode has zero norm");
  m.amplitude_scale_ = 1.0 / std::sqrt(norm);
  double peak = 0.0;
  for (const auto& a : s) peak = std::max(peak, std::norm(a));
  m.peak_bound_ = peak / norm;
  m.width_ = 0.0;
  m.finish();
  m.width_ = m.intensity_rms_;
  if (step > m.intensity_rms_ / 50.0) {
    throw DomainError("sampled mode grid too coarse: spacing must be <= r.m.s. width / 50");
  }
  return m;
}

void TemporalMode::finish() {
  const auto [lo, hi] = support_;
  const auto f = [this](double t) { return intensity(t); };
  const double n0 = numeric::simpson_step(f, lo, hi, step_);
  const double n1 = numeric::simpson_step([&](double t) { return t * f(t); }, lo, hi, step_) / n0;
  const double n2 = numeric::simpson_step([&](double t) { return (t - n1) * (t - n1) * f(t); }, lo,
                                          hi, step_) /
                    n0;
  intensity_mean_ = n1;
  intensity_rms_ = std::sqrt(n2);
}

std::complex<double> TemporalMode::amplitude(double t) const noexcept {
  if (kind_ == Kind::sampled) {
    const auto& s = *samples_;
    const double x = (t - grid_start_) / grid_step_;
    if (!(x >= 0.0) || x > static_cast<double>(s.size() - 1)) return {0.0, 0.0};
    auto i = static_cast<std::size_t>(x);
    if (i >= s.size() - 1) i = s.size() - 2;
    const double frac = x - static_cast<double>(i);
    return amplitude_scale_ * (s[i] + frac * (s[i + 1] - s[i]));
  }
  const double x = (t - center_) / width_;
  return {hermite_function(order_, x) / std::sqrt(width_), 0.0};
}

double TemporalMode::intensity(double t) const noexcept { return std::norm(amplitude(t)); }

std::string TemporalMode::spec() const {
  const std::string at = center_ != 0.0 ? "@" + text::format_double(center_) : std::string();
  switch (kind_) {
    case Kind::gaussian:
      return "gauss:" + text::format_double(width_) + at;
    case Kind::hermite_gauss:
      return "hg:" + std::to_string(order_) + ":" + text::format_double(width_) + at;
    case Kind::sampled:
      return source_path_.empty() ? std::string("sampled") : "sampled:" + source_path_;
  }
  return {};
}

double intensity_profile(const TemporalMode& mode, double t) { return mode.intensity(t); }

double eta_numeric(const TemporalMode& mode, double tau) {
  const auto [lo, hi] = mode.support();
  // Both t and t+tau must lie inside the support.
  const double a = std::max(lo, lo - tau);
  const double b = std::min(hi, hi - tau);
  if (b <= a) return 0.0;
  return numeric::simpson_step(
      [&](double t) { return mode.intensity(t + tau) * mode.intensity(t); }, a, b,
      mode.quadrature_step());
}

double eta_gaussian(double width, double tau) {
  require_width(width);
  return std::exp(-tau * tau / (2.0 * width * width)) / (std::sqrt(2.0 * std::numbers::pi) * width);
}

double autocorrelation_width(const TemporalMode& mode) {
  // tau = t1 - t2 with t1, t2 i.i.d. from |v|^2, so <tau^2> = 2 Var(t).
  return std::numbers::sqrt2 * mode.intensity_rms_width();
}

double eta_integral(const TemporalMode& mode, double a, double b) {
  if (b <= a) return 0.0;
  if (mode.kind() == TemporalMode::Kind::gaussian) {
    const double k = 1.0 / (mode.width() * std::numbers::sqrt2);
    return 0.5 * (std::erfc(a * k) - std::erfc(b * k));
  }
  const auto [lo, hi] = mode.support();
  const double span = hi - lo;
  a = std::max(a, -span);
  b = std::min(b, span);
  if (b <= a) return 0.0;
  return numeric::simpson_step([&](double tau) { return eta_numeric(mode, tau); }, a, b,
                               mode.quadrature_step() * 10.0);
}

EtaProfile eta_profile(const TemporalMode& mode, std::span<const double> taus) {
  EtaProfile p;
  p.tau.assign(taus.begin(), taus.end());
  p.eta.reserve(taus.size());
  for (double tau : taus) p.eta.push_back(eta_numeric(mode, tau));
  return p;
}

void write_eta_csv(const EtaProfile& profile, std::ostream& out) {
  out << "tau_seconds,eta_per_second\n";
  for (std::size_t i = 0; i < profile.tau.size(); ++i) {
    out << text::format_double(profile.tau[i]) << ',' << text::format_double(profile.eta[i]) << '\n';
  }
}

double sample_arrival_time(const TemporalMode& mode, Rng& rng) {
  if (mode.kind() == TemporalMode::Kind::gaussian) {
    // |v|^2 is a normal density with s.d. width / sqrt(2).
    const double z = numeric::inverse_normal_cdf(rng.uniform_open());
    return mode.center() + z * mode.width() / std::numbers::sqrt2;
  }
  const auto [lo, hi] = mode.support();
  const double bound = mode.peak_intensity_bound();
  while (true) {
    const double t = lo + (hi - lo) * rng.uniform();
    if (rng.uniform() * bound < mode.intensity(t)) return t;
  }
}

TemporalMode parse_mode_spec(std::string_view spec) {
  spec = text::trim(spec);
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ConfigError("mode spec '" + std::string(spec) + "' lacks '<kind>:'");
  const auto kind = spec.substr(0, colon);
  auto rest = spec.substr(colon + 1);
  if (kind == "sampled") return read_sampled_mode_csv(std::string(text::trim(rest)));

  double center = 0.0;
  if (const auto at = rest.find('@'); at != std::string_view::npos) {
    center = text::parse_double(rest.substr(at + 1), "mode center");
    rest = rest.substr(0, at);
  }
  try {
    if (kind == "gauss") return TemporalMode::gaussian(text::parse_double(rest, "gaussian width"), center);
    if (kind == "hg") {
      const auto c2 = rest.find(':');
      if (c2 == std::string_view::npos) throw ConfigError("hg mode spec must be hg:<j>:<width>");
      const auto j = text::parse_integer(rest.substr(0, c2), "Hermite-Gauss order");
      if (j < 0 || j > 10000) throw ConfigError("Hermite-Gauss order out of range");
      return TemporalMode::hermite_gauss(static_cast<std::uint32_t>(j),
                                         text::parse_double(rest.substr(c2 + 1), "hg width"), center);
    }
  } catch (const DomainError& e) {
    throw ConfigError("mode spec '" + std::string(spec) + "': " + e.what());
  }
  throw ConfigError("unknown mode kind '" + std::string(kind) + "'");
}

TemporalMode read_sampled_mode_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sampled mode CSV '" + path.string() + "'");
  std::vector<double> times;
  std::vector<std::complex<double>> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = text::split(t, ',');
    if (fields.size() != 3 && fields.size() != 2) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 't,Re(v),Im(v)'");
    }
    try {
      const double time = text::parse_double(fields[0], "t");
      const double re = text::parse_double(fields[1], "Re(v)");
      const double im = fields.size() == 3 ? text::parse_double(fields[2], "Im(v)") : 0.0;
      times.push_back(time);
      values.emplace_back(re, im);
    } catch (const ConfigError& e) {
      if (times.empty() && line_no == 1) continue;  // header
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  try {
    return TemporalMode::sampled(std::move(times), std::move(values), path.string());
  } catch (const DomainError& e) {
    throw ConfigError("sampled mode '" + path.string() + "': " + e.what());
  }
}

}  // namespace photocorr
