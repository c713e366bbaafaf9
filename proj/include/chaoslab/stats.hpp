#pragma once

#include <span>

namespace chaoslab {

/// Least-squares slope of log(y) against log(x). All values must be positive.
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct SpearmanTest {
  double rho = 0.0;
  double p_value = 1.0;  // one-sided, alternative: increasing
};

/// Spearman rank correlation between position (0, 1, 2, ...) and y, with a
/// one-sided p-value for an increasing trend. Exact permutation
/// distribution for up to 9 points, normal approximation beyond.
SpearmanTest spearman_increasing(std::span<const double> y);

}  // namespace chaoslab
