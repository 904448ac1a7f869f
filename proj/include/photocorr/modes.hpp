#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "photocorr/rng.hpp"

namespace photocorr {

/// Deterministic temporal mode function v(t), always normalized so that
/// Integral |v(t)|^2 dt = 1. Widths and times are in seconds.
///
/// Hermite-Gauss modes use physicists' Hermite polynomials with envelope
/// exp(-t^2 / 2 width^2); order 0 is the Gaussian mode. Sampled modes are
/// linearly interpolated in amplitude and vanish outside their grid.
class TemporalMode {
 public:
  enum class Kind { gaussian, hermite_gauss, sampled };

  static TemporalMode gaussian(double width, double center = 0.0);
  static TemporalMode hermite_gauss(std::uint32_t order, double width, double center = 0.0);
  /// `times` must be uniformly spaced and fine compared to the pulse
  /// (spacing <= r.m.s. intensity width / 50).
  static TemporalMode sampled(std::vector<double> times,
                              std::vector<std::complex<double>> amplitudes,
                              std::string source_path = {});

  Kind kind() const noexcept { return kind_; }
  double width() const noexcept { return width_; }
  double center() const noexcept { return center_; }
  std::uint32_t order() const noexcept { return order_; }
  const std::string& source_path() const noexcept { return source_path_; }

  std::complex<double> amplitude(double t) const noexcept;
  double intensity(double t) const noexcept;

  /// Interval outside which |v|^2 is zero (sampled) or negligible (< 1e-14
  /// of the total for parametric modes).
  std::pair<double, double> support() const noexcept { return support_; }
  /// Upper bound of |v(t)|^2 over all t.
  double peak_intensity_bound() const noexcept { return peak_bound_; }
  /// Quadrature step used for integrals over this mode.
  double quadrature_step() const noexcept { return step_; }
  /// Mean and r.m.s. width of the intensity profile |v(t)|^2.
  double intensity_mean() const noexcept { return intensity_mean_; }
  double intensity_rms_width() const noexcept { return intensity_rms_; }

  /// Canonical text form in the mode grammar.
  std::string spec() const;

 private:
  TemporalMode() = default;
  void finish();

  Kind kind_ = Kind::gaussian;
  double width_ = 1.0;
  double center_ = 0.0;
  std::uint32_t order_ = 0;
  std::string source_path_;
  // Sampled grid.
  std::shared_ptr<const std::vector<std::complex<double>>> samples_;
  double grid_start_ = 0.0;
  double grid_step_ = 0.0;
  double amplitude_scale_ = 1.0;

  std::pair<double, double> support_{0.0, 0.0};
  double peak_bound_ = 0.0;
  double step_ = 0.0;
  double intensity_mean_ = 0.0;
  double intensity_rms_ = 0.0;
};

/// |v(t)|^2 of the normalized mode; zero outside a sampled grid.
double intensity_profile(const TemporalMode& mode, double t);

/// Integral |v(t+tau)|^2 |v(t)|^2 dt by composite Simpson quadrature.
double eta_numeric(const TemporalMode& mode, double tau);

/// Closed form for the Gaussian mode: exp(-tau^2/2w^2) / (sqrt(2 pi) w).
double eta_gaussian(double width, double tau);

/// Root-mean-square width of the eta(tau) profile.
double autocorrelation_width(const TemporalMode& mode);

/// Integral of eta over [a, b].
double eta_integral(const TemporalMode& mode, double a, double b);

struct EtaProfile {
  std::vector<double> tau;
  std::vector<double> eta;
};

EtaProfile eta_profile(const TemporalMode& mode, std::span<const double> taus);

/// Two columns: tau_seconds,eta_per_second.
void write_eta_csv(const EtaProfile& profile, std::ostream& out);

/// Draws an arrival time with density |v(t)|^2: exact inverse CDF for the
/// Gaussian mode, rejection sampling otherwise.
double sample_arrival_time(const TemporalMode& mode, Rng& rng);

/// Parses `gauss:<width>[@<t0>]`, `hg:<j>:<width>[@<t0>]`, `sampled:<csv>`.
TemporalMode parse_mode_spec(std::string_view spec);

/// Reads `t,Re(v),Im(v)` rows (header line optional).
TemporalMode read_sampled_mode_csv(const std::filesystem::path& path);

}  // namespace photocorr
