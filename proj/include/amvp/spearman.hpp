#pragma once

#include <span>

namespace amvp::analysis {

struct SpearmanResult {
    double rho = 0.0;
    double p_value = 1.0;
};

/// Spearman rank correlation with average ranks for ties; two-sided p-value
/// from the t approximation t = rho * sqrt((n-2) / (1 - rho^2)). Throws
/// DataError on length mismatch, n < 3, or zero rank variance.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

}  // namespace amvp::analysis
