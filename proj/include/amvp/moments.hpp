#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "amvp/panel.hpp"

namespace amvp::optimize {

/// Sample mean vector and covariance matrix of a return panel.
struct MomentEstimate {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;  // symmetric; PSD up to numerical tolerance
    std::size_t n_obs = 0;
    std::vector<std::string> assets;

    std::size_t size() const { return static_cast<std::size_t>(mu.size()); }
};

/// Column means plus sample covariance with divisor T-1. Symmetry is enforced
/// by averaging sigma with its transpose.
MomentEstimate estimate_moments(const data::ReturnPanel& panel);

/// Same, from a raw scenario/return matrix with the given labels.
MomentEstimate estimate_moments(const Eigen::MatrixXd& returns, std::vector<std::string> assets);

/// Ratio of extreme eigenvalues of a symmetric matrix; +inf when the smallest
/// eigenvalue is not positive.
double condition_estimate(const Eigen::MatrixXd& sigma);

/// Regularization applied before inverting near-singular covariances. When the
/// condition estimate exceeds 1e12, lambda * I is added with
/// lambda = 1e-10 * trace(sigma) / N (an absolute floor covers the all-zero
/// covariance of constant panels). Synthetic-asset augmentation makes the
/// newest column an exact linear combination of the rest, so this fires on
/// every adaptive iteration past the first by construction.
struct RidgeResult {
    Eigen::MatrixXd sigma;
    bool applied = false;
    double lambda = 0.0;
    double condition_before = 0.0;
};

RidgeResult apply_ridge_policy(const Eigen::MatrixXd& sigma);

inline constexpr double kConditionCap = 1e12;

}  // namespace amvp::optimize
