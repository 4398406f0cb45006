#pragma once

#include <string>
#include <vector>

#include "amvp/adaptive.hpp"
#include "amvp/panel.hpp"
#include "amvp/parallel.hpp"

namespace amvp::analysis {

/// Dated series of per-period AMRR values, one per rolling window end.
struct RateSeries {
    std::vector<data::Date> dates;
    std::vector<double> values;
    int window = 0;
    std::string source;  // "historical" or "forward-looking"
    bool annualized = false;
};

struct WindowFailure {
    std::size_t window_index = 0;
    std::string reason;
};

struct RollingResult {
    RateSeries series;
    std::vector<WindowFailure> failures;
};

/// Runs the adaptive minimum-variance loop on every length-`window` slice of
/// the panel and records each final AMRR. With single_shot, only the one-shot
/// constrained MVP rate is computed per window. Windows are independent work
/// units; failed windows become gaps, and more than 5% failures fail the
/// series. Output length is T - window + 1 minus gaps.
RollingResult rolling_amrr(const data::ReturnPanel& panel, int window,
                           const adaptive::AdaptiveConfig& config, bool single_shot = false,
                           Exec exec = Exec::parallel);

}  // namespace amvp::analysis
