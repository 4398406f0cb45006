#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "amvp/qp.hpp"

namespace amvp::optimize {

/// Minimum-CVaR portfolio over a scenario matrix. var_threshold is the
/// auxiliary variable t of the linear program; cvar is the optimal objective
/// t + (1 / ((1-alpha) S)) * sum z_s. Neither is required to be positive.
struct CvarSolution {
    PortfolioWeights weights;
    double var_threshold = 0.0;
    double cvar = 0.0;
    double alpha = 0.0;
    bool tail_undersampled = false;  // (1-alpha)*S < 1
};

/// Exact CVaR of a fixed portfolio: min over t of the piecewise-linear
/// objective, attained at a loss kink. Used to report trace risks and to
/// certify the LP optimality gap.
double cvar_of_weights(const Eigen::MatrixXd& scenarios, const Eigen::VectorXd& weights,
                       double alpha, double* best_t = nullptr);

/// Solves min over (w, t, z) of t + (1/((1-alpha)S)) sum z_s subject to
/// z_s >= -r_s(w) - t, z_s >= 0, w >= 0, sum w = 1.
///
/// Internally the LP dual is solved instead: it has only N+1 rows
///   max nu  s.t.  R'lambda + nu 1 <= 0,  sum lambda = 1,  0 <= lambda <= q,
/// and the primal weights are recovered as the row duals. The a-posteriori
/// primal-dual gap is verified below 1e-9; a larger gap, an infeasible or an
/// unbounded status are internal errors.
CvarSolution min_cvar_lp(const Eigen::MatrixXd& scenarios, double alpha,
                         std::vector<std::string> assets = {});

}  // namespace amvp::optimize
