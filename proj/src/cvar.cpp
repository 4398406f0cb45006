#include "amvp/cvar.hpp"

#include <algorithm>
#include <cmath>

#include "amvp/errors.hpp"
#include "amvp/lp.hpp"

namespace amvp::optimize {

double cvar_of_weights(const Eigen::MatrixXd& scenarios, const Eigen::VectorXd& weights,
                       double alpha, double* best_t) {
    const Eigen::Index s_count = scenarios.rows();
    if (s_count < 1) throw DataError("cvar_of_weights: empty scenario set");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("cvar_of_weights: alpha must be in (0,1)");
    if (scenarios.cols() != weights.size()) {
        throw DataError("cvar_of_weights: weight/scenario dimension mismatch");
    }
    std::vector<double> losses(static_cast<std::size_t>(s_count));
    const Eigen::VectorXd portfolio = scenarios * weights;
    for (Eigen::Index s = 0; s < s_count; ++s) losses[static_cast<std::size_t>(s)] = -portfolio(s);
    std::sort(losses.begin(), losses.end());

    // Objective is piecewise linear and convex in t, so the minimum sits at a
    // kink. Scan kinks from the largest loss down with running exceedance sums.
    const double q = 1.0 / ((1.0 - alpha) * static_cast<double>(s_count));
    double best = losses.back();  // t at the largest loss: no exceedances
    double arg = losses.back();
    double suffix_sum = 0.0;
    double suffix_count = 0.0;
    for (std::size_t k = losses.size(); k-- > 0;) {
        if (k + 1 < losses.size()) {
            suffix_sum += losses[k + 1];
            suffix_count += 1.0;
        }
        const double t = losses[k];
        const double value = t + q * (suffix_sum - suffix_count * t);
        if (value < best - 1e-18 || (value <= best && t < arg)) {
            best = value;
            arg = t;
        }
    }
    if (best_t) *best_t = arg;
    return best;
}

CvarSolution min_cvar_lp(const Eigen::MatrixXd& scenarios, double alpha,
                         std::vector<std::string> assets) {
    const Eigen::Index s_count = scenarios.rows();
    const Eigen::Index n = scenarios.cols();
    if (s_count < 2) throw DataError("min_cvar_lp: need at least 2 scenarios");
    if (n < 1) throw DataError("min_cvar_lp: need at least 1 asset");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("min_cvar_lp: alpha must be in (0,1)");
    if (assets.empty()) {
        assets.reserve(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) assets.push_back("A" + std::to_string(i + 1));
    }
    if (static_cast<Eigen::Index>(assets.size()) != n) {
        throw DataError("min_cvar_lp: asset labels do not match scenario columns");
    }

    const double q = 1.0 / ((1.0 - alpha) * static_cast<double>(s_count));

    // Dual LP variables: lambda_1..lambda_S in [0, q], nu free, s_1..s_N >= 0.
    LpProblem dual;
    const Eigen::Index cols = s_count + 1 + n;
    dual.a = Eigen::MatrixXd::Zero(n + 1, cols);
    dual.a.block(0, 0, n, s_count) = scenarios.transpose();
    dual.a.col(s_count).head(n).setOnes();                        // nu in every asset row
    dual.a.block(0, s_count + 1, n, n).setIdentity();             // slacks
    dual.a.row(n).head(s_count).setOnes();                        // sum lambda = 1
    dual.b = Eigen::VectorXd::Zero(n + 1);
    dual.b(n) = 1.0;
    dual.c = Eigen::VectorXd::Zero(cols);
    dual.c(s_count) = 1.0;
    dual.lower = Eigen::VectorXd::Zero(cols);
    dual.upper = Eigen::VectorXd::Constant(cols, kLpInf);
    dual.upper.head(s_count).setConstant(q);
    dual.lower(s_count) = -kLpInf;

    const LpSolution lp = solve_lp(dual);
    if (lp.status == LpStatus::infeasible) {
        throw NumericError("min_cvar_lp: internal error, dual reported infeasible");
    }
    if (lp.status == LpStatus::unbounded) {
        throw NumericError("min_cvar_lp: internal error, dual reported unbounded");
    }
    if (lp.status != LpStatus::optimal) {
        throw NumericError("min_cvar_lp: simplex iteration limit reached");
    }

    Eigen::VectorXd w = lp.y.head(n);
    if (w.minCoeff() < -1e-9 || std::fabs(w.sum() - 1.0) > 1e-9) {
        throw NumericError("min_cvar_lp: recovered weights violate the simplex constraints");
    }
    w = w.cwiseMax(0.0);

    CvarSolution out;
    out.alpha = alpha;
    out.tail_undersampled = (1.0 - alpha) * static_cast<double>(s_count) < 1.0;
    out.weights.weights = w;
    out.weights.universe = std::move(assets);
    out.weights.long_only = true;
    out.cvar = cvar_of_weights(scenarios, w, alpha, &out.var_threshold);

    const double gap = std::fabs(out.cvar - lp.objective);
    if (gap > 1e-9 * std::max(1.0, std::fabs(lp.objective))) {
        throw NumericError("min_cvar_lp: optimality gap " + std::to_string(gap) + " exceeds 1e-9");
    }
    return out;
}

}  // namespace amvp::optimize
