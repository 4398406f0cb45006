#pragma once

#include <Eigen/Dense>
#include <limits>

namespace amvp::optimize {

inline constexpr double kLpInf = std::numeric_limits<double>::infinity();

/// Dense linear program in computational standard form:
///   maximize c'x  subject to  A x = b,  lower <= x <= upper,
/// with infinite bounds allowed. Solved by a two-phase bounded-variable
/// primal revised simplex with an explicit basis inverse, periodic
/// refactorization, and Bland's rule as the anti-cycling fallback. Sized for
/// few rows and many columns (the CVaR dual has N+1 rows and S+N+1 columns).
struct LpProblem {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

enum class LpStatus {
    optimal,
    infeasible,
    unbounded,
    iteration_limit,
};

struct LpSolution {
    LpStatus status = LpStatus::iteration_limit;
    Eigen::VectorXd x;  // structural variables
    Eigen::VectorXd y;  // row duals (simplex multipliers of the optimal basis)
    double objective = 0.0;
    int iterations = 0;
};

LpSolution solve_lp(const LpProblem& problem);

}  // namespace amvp::optimize
