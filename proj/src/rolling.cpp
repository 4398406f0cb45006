#include "amvp/rolling.hpp"

#include <cmath>
#include <limits>

#include "amvp/errors.hpp"
#include "amvp/moments.hpp"

namespace amvp::analysis {

RollingResult rolling_amrr(const data::ReturnPanel& panel, int window,
                           const adaptive::AdaptiveConfig& config, bool single_shot, Exec exec) {
    config.validate();
    panel.validate();
    const auto t_len = panel.n_rows();
    const auto n = panel.n_assets();
    if (window < static_cast<int>(n) + 2) {
        throw ConfigError("rolling_amrr: window must be >= N + 2 so moments are estimable");
    }
    if (t_len < static_cast<std::size_t>(window)) {
        throw DataError("rolling_amrr: panel shorter than the window");
    }

    const std::size_t n_windows = t_len - static_cast<std::size_t>(window) + 1;
    std::vector<double> rates(n_windows, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::string> errors(n_windows);

    for_each_index(n_windows, exec, [&](std::size_t k) {
        data::ReturnPanel slice;
        slice.assets = panel.assets;
        slice.calendar = panel.calendar;
        slice.dates.assign(panel.dates.begin() + static_cast<std::ptrdiff_t>(k),
                           panel.dates.begin() + static_cast<std::ptrdiff_t>(k) + window);
        slice.returns = panel.returns.middleRows(static_cast<Eigen::Index>(k), window);
        try {
            if (single_shot) {
                const optimize::MomentEstimate moments = optimize::estimate_moments(slice);
                const optimize::MvpSolution sol = optimize::mvp_constrained(moments);
                rates[k] = sol.weights.weights.dot(moments.mu);
            } else {
                const adaptive::AdaptiveTrace trace = adaptive::amvp_run(slice, config);
                rates[k] = trace.final_record().rate;
            }
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    });

    RollingResult out;
    out.series.window = window;
    out.series.source = "historical";
    out.series.annualized = false;
    for (std::size_t k = 0; k < n_windows; ++k) {
        if (!errors[k].empty()) {
            out.failures.push_back({k, errors[k]});
            continue;
        }
        out.series.dates.push_back(panel.dates[k + static_cast<std::size_t>(window) - 1]);
        out.series.values.push_back(rates[k]);
    }
    if (static_cast<double>(out.failures.size()) > 0.05 * static_cast<double>(n_windows)) {
        throw NumericError("rolling_amrr: " + std::to_string(out.failures.size()) + " of " +
                           std::to_string(n_windows) + " windows failed (limit 5%); first: " +
                           out.failures.front().reason);
    }
    return out;
}

}  // namespace amvp::analysis
