#include "photocorr/states.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <regex>
#include <sstream>

#include "photocorr/errors.hpp"
#include "photocorr/text.hpp"

namespace photocorr {

namespace {

constexpr double kTailMass = 1e-12;
// Bound on the discarded share of Sum n^2 P_n, so truncated sums reproduce
// the exact moments to near double precision.
constexpr double kTailMoment = 1e-15;

// Builds P_n for a distribution given log P_n and a successive-ratio bound
// r(n) >= P_{m+1}/P_m for all m >= n. Stops once the tail beyond the cutoff
// is provably below both thresholds.
template <typename LogPmf, typename RatioBound>
std::vector<double> truncated_pmf(double mean, double second_moment, LogPmf log_pmf,
                                  RatioBound ratio_bound) {
  std::vector<double> pn;
  const double moment_scale = std::max(1.0, second_moment);
  for (std::size_t n = 0;; ++n) {
    pn.push_back(std::exp(log_pmf(n)));
    if (static_cast<double>(n) < mean) continue;
    const double next = std::exp(log_pmf(n + 1));
    const double r = ratio_bound(n);
    const double m = static_cast<double>(n + 1);
    const double rho = r * ((m + 1.0) / m) * ((m + 1.0) / m);
    if (r >= 1.0 || rho >= 1.0) continue;
    const double tail_mass = next / (1.0 - r);
    const double tail_moment = next * m * m / (1.0 - rho);
    if (tail_mass < kTailMass && tail_moment < kTailMoment * moment_scale) break;
    if (pn.size() > 50'000'000) throw DomainError("photon-number distribution too broad to truncate");
  }
  return pn;
}

void require_nonnegative_finite(double value, const char* what) {
  if (!std::isfinite(value) || value < 0.0) {
    throw DomainError(std::string(what) + " must be finite and >= 0");
  }
}

}  // namespace

QuantumState QuantumState::coherent(double mean_n) {
  require_nonnegative_finite(mean_n, "coherent mean photon number");
  QuantumState s;
  s.kind_ = Kind::coherent;
  s.parameter_ = mean_n;
  if (mean_n == 0.0) {
    s.pn_ = {1.0};
  } else {
    const double log_mu = std::log(mean_n);
    s.pn_ = truncated_pmf(
        mean_n, mean_n + mean_n * mean_n,
        [&](std::size_t n) {
          const double k = static_cast<double>(n);
          return -mean_n + k * log_mu - std::lgamma(k + 1.0);
        },
        [&](std::size_t n) { return mean_n / static_cast<double>(n + 1); });
  }
  s.mean_ = mean_n;
  s.factorial2_ = mean_n * mean_n;
  s.finish(true);
  return s;
}

QuantumState QuantumState::thermal(double mean_n) {
  require_nonnegative_finite(mean_n, "thermal mean photon number");
  QuantumState s;
  s.kind_ = Kind::thermal;
  s.parameter_ = mean_n;
  if (mean_n == 0.0) {
    s.pn_ = {1.0};
  } else {
    const double log_q = std::log(mean_n) - std::log1p(mean_n);
    const double log_p0 = -std::log1p(mean_n);
    const double q = mean_n / (1.0 + mean_n);
    s.pn_ = truncated_pmf(
        mean_n, 2.0 * mean_n * mean_n + mean_n,
        [&](std::size_t n) { return log_p0 + static_cast<double>(n) * log_q; },
        [&](std::size_t) { return q; });
  }
  s.mean_ = mean_n;
  s.factorial2_ = 2.0 * mean_n * mean_n;
  s.finish(true);
  return s;
}

QuantumState QuantumState::fock(std::uint32_t n) {
  QuantumState s;
  s.kind_ = Kind::fock;
  s.parameter_ = n;
  s.pn_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  s.pn_.back() = 1.0;
  const double k = n;
  s.mean_ = k;
  s.factorial2_ = k * (k - 1.0);
  s.finish(true);
  return s;
}

QuantumState QuantumState::mixture(std::vector<std::pair<double, QuantumState>> components) {
  if (components.empty()) throw DomainError("mixture needs at least one component");
  double total = 0.0;
  for (const auto& [w, st] : components) {
    require_nonnegative_finite(w, "mixture weight");
    total += w;
  }
  if (total <= 0.0) throw DomainError("mixture weights must have a positive sum");

  QuantumState s;
  s.kind_ = Kind::mixture;
  // Nested mixtures are flattened so the text form stays in the grammar.
  for (auto& [w, st] : components) {
    const double weight = w / total;
    if (st.kind() == Kind::mixture) {
      for (const auto& inner : st.components_) {
        s.components_.push_back({weight * inner.weight, inner.state});
      }
    } else {
      s.components_.push_back({weight, std::make_shared<const QuantumState>(std::move(st))});
    }
  }
  std::size_t size = 0;
  for (const auto& c : s.components_) size = std::max(size, c.state->pn_.size());
  s.pn_.assign(size, 0.0);
  for (const auto& c : s.components_) {
    for (std::size_t n = 0; n < c.state->pn_.size(); ++n) s.pn_[n] += c.weight * c.state->pn_[n];
    s.mean_ += c.weight * c.state->mean_;
    s.factorial2_ += c.weight * c.state->factorial2_;
  }
  s.finish(true);
  return s;
}

QuantumState QuantumState::custom(std::vector<double> weights, std::string source_path) {
  if (weights.empty()) throw DomainError("custom distribution is empty");
  double total = 0.0;
  for (double w : weights) {
    require_nonnegative_finite(w, "photon-number probability");
    total += w;
  }
  if (total <= 0.0) throw DomainError("custom distribution has zero total weight");
  QuantumState s;
  s.kind_ = Kind::custom;
  s.source_path_ = std::move(source_path);
  s.renormalized_ = std::fabs(total - 1.0) > 1e-12;
  for (double& w : weights) w /= total;
  while (weights.size() > 1 && weights.back() == 0.0) weights.pop_back();
  s.pn_ = std::move(weights);
  s.finish(false);
  return s;
}

void QuantumState::finish(bool exact_moments_set) {
  double total = 0.0;
  for (double p : pn_) total += p;
  for (double& p : pn_) p /= total;
  cdf_.resize(pn_.size());
  std::partial_sum(pn_.begin(), pn_.end(), cdf_.begin());
  cdf_.back() = 1.0;
  if (!exact_moments_set) {
    mean_ = 0.0;
    factorial2_ = 0.0;
    for (std::size_t n = 0; n < pn_.size(); ++n) {
      const double k = static_cast<double>(n);
      mean_ += k * pn_[n];
      factorial2_ += k * (k - 1.0) * pn_[n];
    }
  }
}

std::string QuantumState::spec() const {
  switch (kind_) {
    case Kind::coherent:
      return "coherent:" + text::format_double(parameter_);
    case Kind::thermal:
      return "thermal:" + text::format_double(parameter_);
    case Kind::fock:
      return "fock:" + std::to_string(static_cast<std::uint64_t>(parameter_));
    case Kind::mixture: {
      std::string out = "mix:";
      for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i > 0) out += '+';
        out += text::format_double(components_[i].weight) + '*' + components_[i].state->spec();
      }
      return out;
    }
    case Kind::custom:
      return source_path_.empty() ? std::string("custom") : "pn:" + source_path_;
  }
  return {};
}

std::uint64_t QuantumState::sample(Rng& rng) const noexcept {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto n = static_cast<std::uint64_t>(it - cdf_.begin());
  return std::min<std::uint64_t>(n, pn_.size() - 1);
}

double mean_photon_number(const QuantumState& state) { return state.mean(); }

double second_factorial_moment(const QuantumState& state) { return state.factorial_moment2(); }

double g2q_from_moments(const QuantumState& state) {
  const double mean = state.mean();
  if (mean <= 0.0) throw DomainError("g2 undefined for vacuum");
  return state.factorial_moment2() / (mean * mean);
}

double g2q_from_pn(std::span<const double> pn) {
  double total = 0.0;
  double mean = 0.0;
  double fact2 = 0.0;
  for (std::size_t n = 0; n < pn.size(); ++n) {
    if (!std::isfinite(pn[n]) || pn[n] < 0.0) throw DomainError("photon-number probabilities must be >= 0");
    const double k = static_cast<double>(n);
    total += pn[n];
    mean += k * pn[n];
    fact2 += k * (k - 1.0) * pn[n];
  }
  if (std::fabs(total - 1.0) > 1e-9) throw DomainError("photon-number distribution is not normalized");
  if (mean <= 0.0) throw DomainError("g2 undefined for vacuum");
  return fact2 / (mean * mean);
}

std::uint64_t sample_photon_number(const QuantumState& state, Rng& rng) { return state.sample(rng); }

std::vector<double> binomial_thinning(std::span<const double> pn, double survival) {
  if (!(survival >= 0.0 && survival <= 1.0)) throw DomainError("survival probability must be in [0,1]");
  std::vector<double> out(pn.size(), 0.0);
  if (pn.empty()) return out;
  if (survival == 1.0) return {pn.begin(), pn.end()};
  if (survival == 0.0) {
    out[0] = std::accumulate(pn.begin(), pn.end(), 0.0);
    return out;
  }
  const double log_s = std::log(survival);
  const double log_l = std::log1p(-survival);
  for (std::size_t n = 0; n < pn.size(); ++n) {
    if (pn[n] == 0.0) continue;
    const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);
    for (std::size_t k = 0; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double log_binom = lg_n - std::lgamma(kk + 1.0) -
                               std::lgamma(static_cast<double>(n - k) + 1.0) + kk * log_s +
                               static_cast<double>(n - k) * log_l;
      out[k] += pn[n] * std::exp(log_binom);
    }
  }
  return out;
}

namespace {

QuantumState parse_simple(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("state spec '" + std::string(spec) + "' lacks '<kind>:'");
  }
  const auto kind = text::trim(spec.substr(0, colon));
  const auto arg = text::trim(spec.substr(colon + 1));
  try {
    if (kind == "coherent") return QuantumState::coherent(text::parse_double(arg, "coherent mean"));
    if (kind == "thermal") return QuantumState::thermal(text::parse_double(arg, "thermal mean"));
    if (kind == "fock") {
      const auto n = text::parse_integer(arg, "fock photon number");
      if (n < 0 || n > 1'000'000) throw ConfigError("fock photon number out of range");
      return QuantumState::fock(static_cast<std::uint32_t>(n));
    }
    if (kind == "pn") return QuantumState::custom(read_pn_csv(std::string(arg)), std::string(arg));
  } catch (const DomainError& e) {
    throw ConfigError("state spec '" + std::string(spec) + "': " + e.what());
  }
  throw ConfigError("unknown state kind '" + std::string(kind) + "'");
}

}  // namespace

QuantumState parse_state_spec(std::string_view spec) {
  spec = text::trim(spec);
  if (!spec.starts_with("mix:")) return parse_simple(spec);

  const std::string body(spec.substr(4));
  // A '+' separates components only where a new `<weight>*` begins, so
  // exponents such as 1e+3 inside a component are left alone.
  static const std::regex weight_start(R"(^\s*(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*\*)");
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '+' && std::regex_search(body.substr(i + 1), weight_start)) {
      parts.push_back(body.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(body.substr(start));

  std::vector<std::pair<double, QuantumState>> components;
  for (const auto& part : parts) {
    const auto star = part.find('*');
    if (star == std::string::npos) throw ConfigError("mixture component '" + part + "' lacks '<weight>*'");
    const double w = text::parse_double(std::string_view(part).substr(0, star), "mixture weight");
    components.emplace_back(w, parse_simple(text::trim(std::string_view(part).substr(star + 1))));
  }
  try {
    return QuantumState::mixture(std::move(components));
  } catch (const DomainError& e) {
    throw ConfigError("state spec '" + std::string(spec) + "': " + e.what());
  }
}

std::vector<double> read_pn_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open photon-number CSV '" + path.string() + "'");
  std::vector<double> pn;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = text::split(t, ',');
    if (fields.size() != 2) throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 'n,P_n'");
    long long n = 0;
    double p = 0.0;
    try {
      n = text::parse_integer(fields[0], "n");
      p = text::parse_double(fields[1], "P_n");
    } catch (const ConfigError& e) {
      if (line_no == 1 && pn.empty()) continue;  // header
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (n < 0) throw IoError(path.string() + ":" + std::to_string(line_no) + ": negative n");
    if (static_cast<std::size_t>(n) >= pn.size()) pn.resize(static_cast<std::size_t>(n) + 1, 0.0);
    pn[static_cast<std::size_t>(n)] = p;
  }
  if (pn.empty()) throw IoError("photon-number CSV '" + path.string() + "' has no rows");
  return pn;
}

}  // namespace photocorr
