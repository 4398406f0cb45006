#pragma once

#include <vector>

#include "amvp/parallel.hpp"
#include "amvp/qp.hpp"

namespace amvp::optimize {

/// One point of the variance efficient frontier. risk is the portfolio
/// standard deviation; points whose subproblem failed are flagged infeasible.
struct FrontierPoint {
    double target_return = 0.0;
    double risk = 0.0;
    PortfolioWeights weights;
    bool feasible = true;
};

/// Traces the frontier on a uniform target-return grid from the constrained
/// MVP's expected return to max(mu). Each point minimizes variance subject to
/// w'mu = target, w >= 0, sum w = 1. Points are independent work units; the
/// output order is the grid order regardless of execution order.
std::vector<FrontierPoint> efficient_frontier(const MomentEstimate& moments, int n_points,
                                              Exec exec = Exec::parallel);

}  // namespace amvp::optimize
