#include "amvp/panel.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "amvp/errors.hpp"

namespace amvp::data {

int annualization_factor(Calendar calendar) {
    return calendar == Calendar::trading_252 ? 252 : 365;
}

Calendar calendar_from_factor(int factor) {
    if (factor == 252) return Calendar::trading_252;
    if (factor == 365) return Calendar::continuous_365;
    throw ConfigError("calendar must be 252 or 365, got " + std::to_string(factor));
}

namespace {

void check_dims(std::size_t rows, std::size_t cols, const Eigen::MatrixXd& m,
                const char* what) {
    if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols) {
        throw DataError(std::string(what) + ": matrix dimensions do not match dates x assets");
    }
}

void check_dates_increasing(const std::vector<Date>& dates, const char* what) {
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(dates[i - 1] < dates[i])) {
            throw DataError(std::string(what) + ": dates not strictly increasing at row " +
                            std::to_string(i + 1) + " (" + dates[i].to_string() + ")");
        }
    }
}

}  // namespace

void PricePanel::validate() const {
    check_dims(dates.size(), assets.size(), prices, "price panel");
    check_dates_increasing(dates, "price panel");
    for (Eigen::Index t = 0; t < prices.rows(); ++t) {
        for (Eigen::Index i = 0; i < prices.cols(); ++i) {
            const double p = prices(t, i);
            if (!std::isfinite(p) || p <= 0.0) {
                throw DataError("non-positive price for asset '" + assets[static_cast<std::size_t>(i)] +
                                "' at " + dates[static_cast<std::size_t>(t)].to_string());
            }
        }
    }
}

void ReturnPanel::validate() const {
    check_dims(dates.size(), assets.size(), returns, "return panel");
    check_dates_increasing(dates, "return panel");
    for (Eigen::Index t = 0; t < returns.rows(); ++t) {
        for (Eigen::Index i = 0; i < returns.cols(); ++i) {
            const double r = returns(t, i);
            if (!std::isfinite(r) || r <= -1.0) {
                throw DataError("invalid return for asset '" + assets[static_cast<std::size_t>(i)] +
                                "' at " + dates[static_cast<std::size_t>(t)].to_string());
            }
        }
    }
}

ReturnPanel compute_returns(const PricePanel& panel) {
    if (panel.n_rows() < 2) throw DataError("compute_returns: need at least 2 price rows");
    ReturnPanel out;
    out.assets = panel.assets;
    out.calendar = panel.calendar;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    const Eigen::Index t_out = panel.prices.rows() - 1;
    out.returns = panel.prices.bottomRows(t_out).array() / panel.prices.topRows(t_out).array() - 1.0;
    return out;
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw DataError("quantile of empty sample");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<AssetSummary> summary_stats(const ReturnPanel& panel) {
    if (panel.n_rows() < 1) throw DataError("summary_stats: need at least 1 return row");
    std::vector<AssetSummary> out;
    out.reserve(panel.n_assets());
    const auto t = static_cast<double>(panel.n_rows());
    for (std::size_t i = 0; i < panel.n_assets(); ++i) {
        const Eigen::VectorXd col = panel.returns.col(static_cast<Eigen::Index>(i));
        AssetSummary s;
        s.asset = panel.assets[i];
        s.mean = col.mean();
        std::vector<double> values(col.data(), col.data() + col.size());
        s.min = *std::min_element(values.begin(), values.end());
        s.max = *std::max_element(values.begin(), values.end());
        // std is exactly zero for an all-equal column, not rounding noise
        s.std_dev = (t < 2 || s.min == s.max)
                        ? 0.0
                        : std::sqrt((col.array() - s.mean).square().sum() / (t - 1.0));
        s.q25 = quantile(values, 0.25);
        s.median = quantile(values, 0.5);
        s.q75 = quantile(values, 0.75);
        out.push_back(std::move(s));
    }
    return out;
}

std::pair<ReturnPanel, ReturnPanel> align_panels(const ReturnPanel& a, const ReturnPanel& b) {
    if (a.n_rows() == 0 || b.n_rows() == 0) throw DataError("align_panels: empty panel");
    std::unordered_set<std::int64_t> b_dates;
    b_dates.reserve(b.dates.size());
    for (const auto& d : b.dates) b_dates.insert(d.serial());

    std::vector<std::size_t> a_keep;
    std::unordered_set<std::int64_t> common;
    for (std::size_t t = 0; t < a.dates.size(); ++t) {
        if (b_dates.count(a.dates[t].serial())) {
            a_keep.push_back(t);
            common.insert(a.dates[t].serial());
        }
    }
    if (a_keep.empty()) throw DataError("align_panels: no common dates");

    auto subset = [](const ReturnPanel& src, const std::vector<std::size_t>& rows) {
        ReturnPanel out;
        out.assets = src.assets;
        out.calendar = src.calendar;
        out.returns.resize(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(src.n_assets()));
        out.dates.reserve(rows.size());
        for (std::size_t k = 0; k < rows.size(); ++k) {
            out.dates.push_back(src.dates[rows[k]]);
            out.returns.row(static_cast<Eigen::Index>(k)) =
                src.returns.row(static_cast<Eigen::Index>(rows[k]));
        }
        return out;
    };

    std::vector<std::size_t> b_keep;
    for (std::size_t t = 0; t < b.dates.size(); ++t) {
        if (common.count(b.dates[t].serial())) b_keep.push_back(t);
    }
    return {subset(a, a_keep), subset(b, b_keep)};
}

}  // namespace amvp::data
