#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "photocorr/rng.hpp"

namespace photocorr {

/// Single-mode quantum state represented by its photon-number distribution
/// P_n = <n|rho|n>. Only the diagonal of rho is kept: every quantity this
/// library computes is phase insensitive.
///
/// Parametric distributions are truncated at the smallest cutoff for which
/// the discarded tail is negligible (see `truncation_cutoff`) and then
/// renormalized. Instances are immutable.
class QuantumState {
 public:
  enum class Kind { coherent, thermal, fock, mixture, custom };

  struct Component {
    double weight;
    std::shared_ptr<const QuantumState> state;
  };

  static QuantumState coherent(double mean_n);
  static QuantumState thermal(double mean_n);
  static QuantumState fock(std::uint32_t n);
  /// Weights are normalized; they must be nonnegative with a positive sum.
  static QuantumState mixture(std::vector<std::pair<double, QuantumState>> components);
  /// Accepts raw counts; renormalizes and sets `renormalized()` when the input
  /// did not already sum to one.
  static QuantumState custom(std::vector<double> weights, std::string source_path = {});

  Kind kind() const noexcept { return kind_; }
  /// Defining parameter: mean for coherent/thermal, n for Fock, 0 otherwise.
  double parameter() const noexcept { return parameter_; }
  std::span<const double> distribution() const noexcept { return pn_; }
  std::size_t truncation_cutoff() const noexcept { return pn_.size() - 1; }
  bool renormalized() const noexcept { return renormalized_; }
  const std::vector<Component>& components() const noexcept { return components_; }
  const std::string& source_path() const noexcept { return source_path_; }

  /// Canonical text form in the state grammar.
  std::string spec() const;

  // Exact moments; computed once at construction.
  double mean() const noexcept { return mean_; }
  double factorial_moment2() const noexcept { return factorial2_; }

  /// Inverse-CDF draw of a photon number.
  std::uint64_t sample(Rng& rng) const noexcept;

 private:
  QuantumState() = default;
  void finish(bool exact_moments_set);

  Kind kind_ = Kind::custom;
  double parameter_ = 0.0;
  std::vector<double> pn_;
  std::vector<double> cdf_;
  std::vector<Component> components_;
  std::string source_path_;
  bool renormalized_ = false;
  double mean_ = 0.0;
  double factorial2_ = 0.0;
};

/// Sum_n n P_n.
double mean_photon_number(const QuantumState& state);

/// Sum_n n(n-1) P_n = Tr{rho (b^dag)^2 b^2}.
double second_factorial_moment(const QuantumState& state);

/// Tr{rho (b^dag)^2 b^2} / Tr{rho b^dag b}^2. Throws DomainError for vacuum.
double g2q_from_moments(const QuantumState& state);

/// Sum n(n-1)P_n / (Sum n P_n)^2 for a normalized distribution.
double g2q_from_pn(std::span<const double> pn);

std::uint64_t sample_photon_number(const QuantumState& state, Rng& rng);

/// Photon-number distribution after independent loss with survival
/// probability `survival`.
std::vector<double> binomial_thinning(std::span<const double> pn, double survival);

/// Parses `coherent:<n>`, `thermal:<n>`, `fock:<n>`,
/// `mix:<w1>*<spec1>+<w2>*<spec2>...`, or `pn:<csv path>`.
QuantumState parse_state_spec(std::string_view spec);

/// Reads `n,P_n` rows; a non-numeric header line is skipped. Missing n
/// values are zero-filled.
std::vector<double> read_pn_csv(const std::filesystem::path& path);

}  // namespace photocorr
