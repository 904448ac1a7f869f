#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace photocorr {

struct AcceptanceOptions {
  /// Fraction of the full-size runs (1e6 pulses, 2 s stationary). Fixed
  /// tolerances widen by 1/sqrt(scale) below 1; 3-sigma checks need no change.
  double scale = 1.0;
  unsigned threads = 1;
  std::uint64_t seed = 20240601;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = true;
  std::vector<std::string> details;  // one line per check, prefixed ok/FAIL
  double seconds = 0.0;
};

CriterionResult run_criterion(int id, const AcceptanceOptions& options);
/// Criteria 1..7 in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// `PASS <id> <title> (<t> s)` per criterion, followed by its check lines
/// when `verbose`.
void print_result(const CriterionResult& result, std::ostream& out, bool verbose);

}  // namespace photocorr
