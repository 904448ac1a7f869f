#pragma once

#include <cstddef>
#include <functional>

namespace photocorr::numeric {

/// Composite Simpson rule on [a, b] with `intervals` subintervals
/// (rounded up to an even count).
double simpson(const std::function<double(double)>& f, double a, double b,
               std::size_t intervals);

/// Composite Simpson on [a, b] with a step no larger than `max_step`.
double simpson_step(const std::function<double(double)>& f, double a, double b,
                    double max_step);

/// Standard normal cumulative distribution function.
double normal_cdf(double x);

/// Inverse of the standard normal CDF for p in (0, 1); about 1e-15 accuracy.
double inverse_normal_cdf(double p);

/// Golden-section minimization of a unimodal function on [lo, hi].
double golden_section_minimize(const std::function<double(double)>& f, double lo,
                               double hi, double tolerance);

}  // namespace photocorr::numeric
