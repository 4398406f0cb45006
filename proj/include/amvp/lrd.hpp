#pragma once

#include <span>
#include <string>
#include <vector>

namespace amvp::analysis {

/// Long-range-dependence summary: hurst = 0.5 + d_v, always.
struct LrdEstimate {
    double d_v = 0.0;
    double hurst = 0.5;
    std::string method;
};

double hurst_from_dv(double d_v);

/// Fits FIGARCH(1, d_v, 1) to the demeaned series and reports d_v clipped to
/// [0, 1). Boundary solutions are flagged in the method label.
LrdEstimate estimate_dv(std::span<const double> series);

/// Sign-preserving log: sign(x) * ln(1 + |x|), elementwise. Odd and strictly
/// monotone, so it is defined for the negative rate values that raw logs
/// cannot handle.
std::vector<double> log_transform(std::span<const double> values);

}  // namespace amvp::analysis
