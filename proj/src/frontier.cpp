#include "amvp/frontier.hpp"

#include <cmath>
#include <limits>

#include "amvp/errors.hpp"

namespace amvp::optimize {

std::vector<FrontierPoint> efficient_frontier(const MomentEstimate& moments, int n_points,
                                              Exec exec) {
    if (n_points < 2) throw ConfigError("efficient_frontier: n_points must be >= 2");
    const Eigen::Index n = moments.mu.size();

    const MvpSolution mvp = mvp_constrained(moments);
    const double low = mvp.weights.weights.dot(moments.mu);
    Eigen::Index top_asset = 0;
    const double high = moments.mu.maxCoeff(&top_asset);

    std::vector<FrontierPoint> points(static_cast<std::size_t>(n_points));
    const double span = high - low;

    for_each_index(points.size(), exec, [&](std::size_t j) {
        FrontierPoint& point = points[j];
        const double frac = static_cast<double>(j) / static_cast<double>(n_points - 1);
        point.target_return = low + frac * span;
        if (span <= 0.0) {
            // Degenerate panel: the MVP already earns the top return.
            point.target_return = low;
            point.weights = mvp.weights;
            point.risk = std::sqrt(std::max(mvp.variance, 0.0));
            return;
        }
        // Blend of the MVP and the top-return corner is feasible and hits the
        // target exactly, so every grid target starts from a valid point.
        const double theta = (point.target_return - low) / span;
        Eigen::VectorXd w0 = (1.0 - theta) * mvp.weights.weights;
        w0(top_asset) += theta;
        try {
            const MvpSolution sol = min_variance_for_target(moments, point.target_return, w0);
            point.weights = sol.weights;
            point.risk = std::sqrt(std::max(sol.variance, 0.0));
            point.feasible = true;
        } catch (const NumericError&) {
            point.feasible = false;
            point.risk = std::numeric_limits<double>::quiet_NaN();
            point.weights.universe = moments.assets;
            point.weights.weights = Eigen::VectorXd::Zero(n);
        }
    });
    return points;
}

}  // namespace amvp::optimize
