#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "amvp/moments.hpp"

namespace amvp::optimize {

/// Fully-invested weight vector over a (possibly synthetic-augmented) universe.
/// long_only is false only for the unconstrained closed-form solution, which
/// may carry negative weights.
struct PortfolioWeights {
    Eigen::VectorXd weights;
    std::vector<std::string> universe;
    bool long_only = true;
};

struct MvpSolution {
    PortfolioWeights weights;
    double variance = 0.0;  // w' sigma w on the unregularized covariance
    bool ridge_applied = false;
    double condition = 0.0;  // condition estimate before ridge
    int iterations = 0;      // active-set iterations (0 when closed form suffices)
};

/// Unconstrained minimum-variance weights sigma^{-1} 1 / (1' sigma^{-1} 1).
/// Applies the ridge policy first; throws NumericError when the covariance is
/// numerically singular even after ridge.
MvpSolution mvp_closed_form(const MomentEstimate& moments);

/// Minimum-variance weights on the simplex {w >= 0, sum w = 1}. Returns the
/// closed-form answer unchanged when it is already non-negative; otherwise
/// runs a primal active-set method seeded from the projected closed form.
/// The KKT residual of the returned solution is verified below 1e-8.
MvpSolution mvp_constrained(const MomentEstimate& moments);

/// w' sigma w. Throws DataError on dimension mismatch.
double portfolio_variance(const PortfolioWeights& weights, const MomentEstimate& moments);

/// Minimum variance subject to w >= 0, sum w = 1, w'mu = target_return,
/// started from the feasible point w0. Used by the frontier tracer.
MvpSolution min_variance_for_target(const MomentEstimate& moments, double target_return,
                                    const Eigen::VectorXd& w0);

namespace detail {

/// Primal active-set solver for min w'Qw s.t. Cw = d, w >= 0, from the
/// feasible start w0. Q must be positive definite (pre-ridged). Equality
/// constraints are handled through KKT solves on the free variables.
struct QpResult {
    Eigen::VectorXd w;
    int iterations = 0;
    double kkt_residual = 0.0;
};

QpResult solve_nonneg_qp(const Eigen::MatrixXd& q, const Eigen::MatrixXd& c,
                         const Eigen::VectorXd& d, const Eigen::VectorXd& w0);

}  // namespace detail

}  // namespace amvp::optimize
