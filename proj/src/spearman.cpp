#include "amvp/spearman.hpp"

#include <algorithm>
#include <cmath>

#include "amvp/errors.hpp"
#include "amvp/ranks.hpp"
#include "amvp/special.hpp"

namespace amvp::analysis {

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("spearman: length mismatch");
    const auto n = x.size();
    if (n < 3) throw DataError("spearman: need at least 3 observations");

    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    const double mean_rank = (static_cast<double>(n) + 1.0) / 2.0;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mean_rank;
        const double dy = ry[i] - mean_rank;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw DataError("spearman: zero rank variance");

    SpearmanResult out;
    out.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    if (std::fabs(out.rho) >= 1.0 - 1e-15) {
        out.p_value = 0.0;
        return out;
    }
    const double dof = static_cast<double>(n) - 2.0;
    const double t = out.rho * std::sqrt(dof / (1.0 - out.rho * out.rho));
    out.p_value = 2.0 * (1.0 - special::student_t_cdf(std::fabs(t), dof));
    return out;
}

}  // namespace amvp::analysis
