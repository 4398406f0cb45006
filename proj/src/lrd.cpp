#include "amvp/lrd.hpp"

#include <cmath>

#include "amvp/arfima_figarch.hpp"
#include "amvp/errors.hpp"

namespace amvp::analysis {

double hurst_from_dv(double d_v) { return 0.5 + d_v; }

LrdEstimate estimate_dv(std::span<const double> series) {
    if (series.size() < 250) throw DataError("estimate_dv: need at least 250 observations");
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(series.size());
    std::vector<double> demeaned(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) demeaned[t] = series[t] - mean;

    const scenarios::FigarchFit fit = scenarios::fit_figarch(demeaned);
    LrdEstimate out;
    out.d_v = std::min(std::max(fit.params.d_v, 0.0), 0.9999999999);
    out.hurst = hurst_from_dv(out.d_v);
    out.method = fit.boundary ? "figarch-qml-boundary" : "figarch-qml";
    return out;
}

std::vector<double> log_transform(std::span<const double> values) {
    std::vector<double> out(values.size());
    for (std::size_t t = 0; t < values.size(); ++t) {
        out[t] = std::copysign(std::log1p(std::fabs(values[t])), values[t]);
    }
    return out;
}

}  // namespace amvp::analysis
