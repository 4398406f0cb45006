#include "amvp/chow.hpp"

#include <algorithm>
#include <cmath>

#include "amvp/errors.hpp"
#include "amvp/special.hpp"

namespace amvp::analysis {

namespace {

// Residual sum of squares of y on (1, x) over obs indices [first, last).
// Returns false when the regressor is (numerically) constant.
bool segment_ssr(const std::vector<double>& x, const std::vector<double>& y, std::size_t first,
                 std::size_t last, double* ssr) {
    const auto n = static_cast<double>(last - first);
    if (last - first < 3) return false;
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t t = first; t < last; ++t) {
        sx += x[t];
        sy += y[t];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t t = first; t < last; ++t) {
        const double dx = x[t] - mx;
        const double dy = y[t] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 1e-30 * (1.0 + mx * mx) * n) return false;
    const double slope = sxy / sxx;
    *ssr = std::max(syy - slope * sxy, 0.0);
    return true;
}

}  // namespace

std::size_t default_min_segment(std::size_t series_length) {
    const auto tenth = static_cast<std::size_t>(
        std::ceil(0.1 * static_cast<double>(series_length)));
    return std::max<std::size_t>(30, tenth);
}

std::vector<ChowResult> chow_scan(const RateSeries& series, std::size_t min_segment,
                                  bool bonferroni, std::vector<SkippedBreakpoint>* skipped,
                                  Exec exec) {
    const std::size_t len = series.values.size();
    if (min_segment < 3) throw ConfigError("chow_scan: min_segment must be >= 3");
    if (len < 2 * min_segment + 1) {
        throw DataError("chow_scan: series length " + std::to_string(len) +
                        " too short for min_segment " + std::to_string(min_segment));
    }

    // AR(1) observation pairs: obs t regresses value[t] on value[t-1].
    const std::size_t n_obs = len - 1;
    std::vector<double> x(n_obs);
    std::vector<double> y(n_obs);
    for (std::size_t t = 0; t < n_obs; ++t) {
        x[t] = series.values[t];
        y[t] = series.values[t + 1];
    }

    constexpr double kParams = 2.0;  // intercept + AR coefficient
    double ssr_full = 0.0;
    if (!segment_ssr(x, y, 0, n_obs, &ssr_full)) {
        throw DataError("chow_scan: full-sample regression is singular");
    }

    // Candidate tau = size of the left observation block.
    std::vector<std::size_t> candidates;
    for (std::size_t tau = min_segment; tau + min_segment <= n_obs; ++tau) candidates.push_back(tau);
    const auto n_tests = static_cast<double>(candidates.size());

    std::vector<ChowResult> results(candidates.size());
    std::vector<std::string> skip_reason(candidates.size());
    for_each_index(candidates.size(), exec, [&](std::size_t c) {
        const std::size_t tau = candidates[c];
        double ssr_left = 0.0;
        double ssr_right = 0.0;
        if (!segment_ssr(x, y, 0, tau, &ssr_left)) {
            skip_reason[c] = "singular left-segment regression";
            return;
        }
        if (!segment_ssr(x, y, tau, n_obs, &ssr_right)) {
            skip_reason[c] = "singular right-segment regression";
            return;
        }
        const double dof = static_cast<double>(n_obs) - 2.0 * kParams;
        const double pooled = ssr_left + ssr_right;
        double f_stat = 0.0;
        if (pooled > 0.0) {
            f_stat = std::max(0.0, (ssr_full - pooled) / kParams / (pooled / dof));
        } else if (ssr_full > 0.0) {
            f_stat = std::numeric_limits<double>::infinity();
        }
        double p_value = std::isinf(f_stat) ? 0.0 : 1.0 - special::f_cdf(f_stat, kParams, dof);
        if (bonferroni) p_value = std::min(1.0, p_value * n_tests);

        ChowResult& r = results[c];
        // Obs tau regresses value[tau] on value[tau-1]; its response is the
        // last point of the left regime.
        r.breakpoint_date = series.dates[tau];
        r.f_stat = f_stat;
        r.p_value = p_value;
        r.n_left = tau;
        r.n_right = n_obs - tau;
    });

    std::vector<ChowResult> out;
    out.reserve(results.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (!skip_reason[c].empty()) {
            if (skipped) skipped->push_back({candidates[c], skip_reason[c]});
            continue;
        }
        out.push_back(results[c]);
    }
    return out;
}

}  // namespace amvp::analysis
