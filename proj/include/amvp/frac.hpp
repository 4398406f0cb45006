#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace amvp::scenarios {

/// Binomial expansion coefficients pi_0..pi_{n-1} of (1-L)^d via the
/// recursion pi_0 = 1, pi_j = pi_{j-1} * (j-1-d) / j.
std::vector<double> frac_diff_weights(double d, std::size_t n);

/// Convolution of the series with frac_diff_weights(d, truncation), same
/// length, zero pre-sample values. d = 0 is the identity, d = 1 the first
/// difference.
std::vector<double> apply_frac_filter(std::span<const double> series, double d,
                                      std::size_t truncation);

}  // namespace amvp::scenarios
