#include "amvp/frac.hpp"

#include <algorithm>

#include "amvp/errors.hpp"

namespace amvp::scenarios {

std::vector<double> frac_diff_weights(double d, std::size_t n) {
    if (n < 1) throw ConfigError("frac_diff_weights: n must be >= 1");
    std::vector<double> pi(n);
    pi[0] = 1.0;
    for (std::size_t j = 1; j < n; ++j) {
        pi[j] = pi[j - 1] * (static_cast<double>(j) - 1.0 - d) / static_cast<double>(j);
    }
    return pi;
}

std::vector<double> apply_frac_filter(std::span<const double> series, double d,
                                      std::size_t truncation) {
    if (truncation < 1) throw ConfigError("apply_frac_filter: truncation must be >= 1");
    const std::vector<double> weights = frac_diff_weights(d, truncation);
    std::vector<double> out(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        const std::size_t lags = std::min(t + 1, truncation);
        double acc = 0.0;
        for (std::size_t j = 0; j < lags; ++j) acc += weights[j] * series[t - j];
        out[t] = acc;
    }
    return out;
}

}  // namespace amvp::scenarios
