#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "amvp/parallel.hpp"
#include "amvp/rolling.hpp"

namespace amvp::analysis {

struct ChowResult {
    data::Date breakpoint_date;
    double f_stat = 0.0;
    double p_value = 1.0;
    std::size_t n_left = 0;
    std::size_t n_right = 0;
};

struct SkippedBreakpoint {
    std::size_t index = 0;
    std::string reason;
};

/// Chow scan over every admissible breakpoint of the series. The regression
/// is AR(1) with intercept (q = 2 parameters); for each candidate split the
/// statistic is
///   F = ((SSR_full - SSR_left - SSR_right) / q) / ((SSR_left + SSR_right) / (n - 2q))
/// with the p-value from F(q, n - 2q). Breakpoints with a singular segment
/// regression are skipped (reasons in `skipped` when provided). Bonferroni
/// multiplies p-values by the number of candidates, capped at 1.
std::vector<ChowResult> chow_scan(const RateSeries& series, std::size_t min_segment,
                                  bool bonferroni = false,
                                  std::vector<SkippedBreakpoint>* skipped = nullptr,
                                  Exec exec = Exec::parallel);

/// Default trimming: max(30, ceil(0.1 * n_observations)).
std::size_t default_min_segment(std::size_t series_length);

}  // namespace amvp::analysis
