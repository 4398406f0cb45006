#include "amvp/moments.hpp"

#include <limits>

#include "amvp/errors.hpp"

namespace amvp::optimize {

MomentEstimate estimate_moments(const Eigen::MatrixXd& returns, std::vector<std::string> assets) {
    const Eigen::Index t = returns.rows();
    const Eigen::Index n = returns.cols();
    if (t < 2) throw DataError("estimate_moments: need at least 2 observations");
    if (static_cast<Eigen::Index>(assets.size()) != n) {
        throw DataError("estimate_moments: asset labels do not match columns");
    }
    MomentEstimate out;
    out.assets = std::move(assets);
    out.n_obs = static_cast<std::size_t>(t);
    out.mu = returns.colwise().mean();
    const Eigen::MatrixXd centered = returns.rowwise() - out.mu.transpose();
    Eigen::MatrixXd sigma = centered.transpose() * centered / static_cast<double>(t - 1);
    out.sigma = 0.5 * (sigma + sigma.transpose());
    return out;
}

MomentEstimate estimate_moments(const data::ReturnPanel& panel) {
    return estimate_moments(panel.returns, panel.assets);
}

double condition_estimate(const Eigen::MatrixXd& sigma) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma, Eigen::EigenvaluesOnly);
    const double lo = solver.eigenvalues().minCoeff();
    const double hi = solver.eigenvalues().maxCoeff();
    if (hi <= 0.0) return std::numeric_limits<double>::infinity();
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

RidgeResult apply_ridge_policy(const Eigen::MatrixXd& sigma) {
    RidgeResult out;
    out.sigma = sigma;
    out.condition_before = condition_estimate(sigma);
    if (out.condition_before <= kConditionCap) return out;
    const auto n = static_cast<double>(sigma.rows());
    double lambda = 1e-10 * sigma.trace() / n;
    if (lambda <= 0.0) lambda = 1e-12;  // constant panel: any PD floor gives the uniform solution
    out.sigma.diagonal().array() += lambda;
    out.applied = true;
    out.lambda = lambda;
    return out;
}

}  // namespace amvp::optimize
