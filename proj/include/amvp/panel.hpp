#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "amvp/date.hpp"

namespace amvp::data {

/// Annualization calendar: 252 trading days for equities, 365 for assets that
/// trade continuously.
enum class Calendar {
    trading_252,
    continuous_365,
};

int annualization_factor(Calendar calendar);
Calendar calendar_from_factor(int factor);

/// Dated T x N matrix of strictly positive closing prices.
struct PricePanel {
    std::vector<Date> dates;
    std::vector<std::string> assets;
    Eigen::MatrixXd prices;  // rows = dates, cols = assets
    Calendar calendar = Calendar::trading_252;

    std::size_t n_rows() const { return dates.size(); }
    std::size_t n_assets() const { return assets.size(); }

    /// Throws DataError if dimensions disagree, dates are not strictly
    /// increasing, or any price is non-positive/non-finite.
    void validate() const;
};

/// Dated T x N matrix of arithmetic per-period returns; every entry > -1.
struct ReturnPanel {
    std::vector<Date> dates;
    std::vector<std::string> assets;
    Eigen::MatrixXd returns;
    Calendar calendar = Calendar::trading_252;

    std::size_t n_rows() const { return dates.size(); }
    std::size_t n_assets() const { return assets.size(); }

    void validate() const;
};

/// Per-asset distribution summary of per-period returns.
struct AssetSummary {
    std::string asset;
    double mean = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double max = 0.0;
};

/// returns[t][i] = prices[t+1][i] / prices[t][i] - 1. Output keeps the dates
/// of the later row of each pair, so it has T-1 rows.
ReturnPanel compute_returns(const PricePanel& panel);

/// Sample statistics per asset. Standard deviation uses divisor T-1 (zero when
/// T < 2); quartiles interpolate linearly between order statistics.
std::vector<AssetSummary> summary_stats(const ReturnPanel& panel);

/// Restricts both panels to their common dates. Throws DataError when the
/// intersection is empty.
std::pair<ReturnPanel, ReturnPanel> align_panels(const ReturnPanel& a, const ReturnPanel& b);

/// Linear-interpolation quantile of an unsorted sample, p in [0, 1].
double quantile(std::vector<double> values, double p);

}  // namespace amvp::data
