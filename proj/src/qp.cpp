#include "amvp/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "amvp/errors.hpp"

namespace amvp::optimize {

namespace detail {

namespace {

// Assembles and solves the equality-constrained subproblem on the free set:
// [2Q_FF C_F'; C_F 0] [w_F; y] = [0; d]. Returns (w_full, y) with working-set
// entries of w_full pinned at zero.
struct FaceSolution {
    Eigen::VectorXd w;
    Eigen::VectorXd y;
};

FaceSolution solve_face(const Eigen::MatrixXd& q, const Eigen::MatrixXd& c,
                        const Eigen::VectorXd& d, const std::vector<bool>& active) {
    const Eigen::Index n = q.rows();
    const Eigen::Index k = c.rows();
    std::vector<Eigen::Index> free_idx;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!active[static_cast<std::size_t>(i)]) free_idx.push_back(i);
    }
    const auto nf = static_cast<Eigen::Index>(free_idx.size());
    if (nf == 0) throw NumericError("active-set QP: all variables pinned at zero");

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nf + k, nf + k);
    for (Eigen::Index a = 0; a < nf; ++a) {
        for (Eigen::Index b = 0; b < nf; ++b) kkt(a, b) = 2.0 * q(free_idx[a], free_idx[b]);
        for (Eigen::Index r = 0; r < k; ++r) {
            kkt(a, nf + r) = c(r, free_idx[a]);
            kkt(nf + r, a) = c(r, free_idx[a]);
        }
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf + k);
    rhs.tail(k) = d;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    Eigen::VectorXd sol = lu.solve(rhs);
    sol += lu.solve(rhs - kkt * sol);  // one refinement step tightens ridge-floored systems
    if ((kkt * sol - rhs).lpNorm<Eigen::Infinity>() > 1e-7 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) {
        throw NumericError("active-set QP: inconsistent KKT system on the current face");
    }

    FaceSolution out;
    out.w = Eigen::VectorXd::Zero(n);
    for (Eigen::Index a = 0; a < nf; ++a) out.w(free_idx[a]) = sol(a);
    out.y = sol.tail(k);
    return out;
}

}  // namespace

QpResult solve_nonneg_qp(const Eigen::MatrixXd& q, const Eigen::MatrixXd& c,
                         const Eigen::VectorXd& d, const Eigen::VectorXd& w0) {
    const Eigen::Index n = q.rows();
    const int max_iterations = static_cast<int>(8 * n + 100);

    Eigen::VectorXd w = w0;
    std::vector<bool> active(static_cast<std::size_t>(n), false);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (w(i) <= 0.0) {
            w(i) = 0.0;
            active[static_cast<std::size_t>(i)] = true;
        }
    }

    const double grad_scale = 1.0 + 2.0 * q.cwiseAbs().maxCoeff();
    const double step_tol = 1e-13 * (1.0 + w.cwiseAbs().maxCoeff());
    const double mult_tol = 1e-10 * grad_scale;

    Eigen::VectorXd best_w = w;
    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        const FaceSolution face = solve_face(q, c, d, active);
        const Eigen::VectorXd direction = face.w - w;

        if (direction.lpNorm<Eigen::Infinity>() <= step_tol) {
            // Stationary on the face: examine bound multipliers.
            const Eigen::VectorXd nu = -face.y;
            const Eigen::VectorXd grad = 2.0 * q * w;
            const Eigen::VectorXd mults = grad - c.transpose() * nu;
            int drop = -1;
            double most_negative = -mult_tol;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (active[static_cast<std::size_t>(i)] && mults(i) < most_negative) {
                    most_negative = mults(i);
                    drop = static_cast<int>(i);
                }
            }
            if (drop < 0) {
                QpResult out;
                out.w = w;
                out.iterations = iter;
                double resid = (c * w - d).lpNorm<Eigen::Infinity>();
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (active[static_cast<std::size_t>(i)]) continue;
                    resid = std::max(resid, std::fabs(grad(i) - (c.transpose() * nu)(i)));
                }
                out.kkt_residual = resid;
                return out;
            }
            active[static_cast<std::size_t>(drop)] = false;
            continue;
        }

        // Longest feasible step toward the face minimizer.
        double step = 1.0;
        int blocking = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (active[static_cast<std::size_t>(i)] || direction(i) >= 0.0) continue;
            const double limit = -w(i) / direction(i);
            if (limit < step) {
                step = limit;
                blocking = static_cast<int>(i);
            }
        }
        w += step * direction;
        if (blocking >= 0) {
            w(blocking) = 0.0;
            active[static_cast<std::size_t>(blocking)] = true;
        }
        best_w = w;
    }

    std::ostringstream msg;
    msg << "active-set QP did not converge within " << max_iterations
        << " iterations; best iterate weights:";
    for (Eigen::Index i = 0; i < n; ++i) msg << ' ' << best_w(i);
    throw NumericError(msg.str());
}

}  // namespace detail

namespace {

Eigen::VectorXd closed_form_weights(const Eigen::MatrixXd& sigma_pd, double condition) {
    const Eigen::Index n = sigma_pd.rows();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma_pd);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    if (ldlt.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "covariance numerically singular after ridge (condition estimate " << condition << ")";
        throw NumericError(msg.str());
    }
    const Eigen::VectorXd x = ldlt.solve(ones);
    const double denom = x.sum();
    const double residual = (sigma_pd * x - ones).lpNorm<Eigen::Infinity>();
    if (!std::isfinite(denom) || std::fabs(denom) < 1e-300 || residual > 1e-6) {
        std::ostringstream msg;
        msg << "covariance numerically singular after ridge (condition estimate " << condition << ")";
        throw NumericError(msg.str());
    }
    return x / denom;
}

}  // namespace

MvpSolution mvp_closed_form(const MomentEstimate& moments) {
    const RidgeResult ridge = apply_ridge_policy(moments.sigma);
    const double cond_after = ridge.applied ? condition_estimate(ridge.sigma) : ridge.condition_before;
    if (cond_after > kConditionCap) {
        std::ostringstream msg;
        msg << "covariance numerically singular after ridge (condition estimate " << cond_after << ")";
        throw NumericError(msg.str());
    }
    MvpSolution out;
    out.ridge_applied = ridge.applied;
    out.condition = ridge.condition_before;
    out.weights.universe = moments.assets;
    out.weights.weights = closed_form_weights(ridge.sigma, cond_after);
    out.weights.long_only = out.weights.weights.minCoeff() >= 0.0;
    out.variance = out.weights.weights.dot(moments.sigma * out.weights.weights);
    return out;
}

MvpSolution mvp_constrained(const MomentEstimate& moments) {
    const Eigen::Index n = moments.sigma.rows();
    const RidgeResult ridge = apply_ridge_policy(moments.sigma);

    Eigen::VectorXd seed;
    bool closed_form_ok = false;
    try {
        const double cond_after = ridge.applied ? condition_estimate(ridge.sigma) : ridge.condition_before;
        if (cond_after <= kConditionCap) {
            seed = closed_form_weights(ridge.sigma, cond_after);
            closed_form_ok = true;
        }
    } catch (const NumericError&) {
        closed_form_ok = false;
    }

    MvpSolution out;
    out.ridge_applied = ridge.applied;
    out.condition = ridge.condition_before;
    out.weights.universe = moments.assets;
    out.weights.long_only = true;

    if (closed_form_ok && seed.minCoeff() >= -1e-12) {
        out.weights.weights = seed;
        out.variance = seed.dot(moments.sigma * seed);
        return out;
    }

    // Projected closed form as the starting point; uniform when degenerate.
    Eigen::VectorXd w0;
    if (closed_form_ok) {
        w0 = seed.cwiseMax(0.0);
        const double total = w0.sum();
        if (total > 1e-12) {
            w0 /= total;
        } else {
            w0 = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
        }
    } else {
        w0 = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    }

    Eigen::MatrixXd c = Eigen::MatrixXd::Ones(1, n);
    Eigen::VectorXd d = Eigen::VectorXd::Ones(1);
    const detail::QpResult qp = detail::solve_nonneg_qp(ridge.sigma, c, d, w0);
    if (qp.kkt_residual > 1e-8) {
        throw NumericError("mvp_constrained: KKT residual " + std::to_string(qp.kkt_residual) +
                           " exceeds 1e-8");
    }
    out.weights.weights = qp.w;
    out.iterations = qp.iterations;
    out.variance = qp.w.dot(moments.sigma * qp.w);
    return out;
}

double portfolio_variance(const PortfolioWeights& weights, const MomentEstimate& moments) {
    if (weights.weights.size() != moments.sigma.rows()) {
        throw DataError("portfolio_variance: weight/covariance dimension mismatch");
    }
    return weights.weights.dot(moments.sigma * weights.weights);
}

MvpSolution min_variance_for_target(const MomentEstimate& moments, double target_return,
                                    const Eigen::VectorXd& w0) {
    const Eigen::Index n = moments.sigma.rows();
    const RidgeResult ridge = apply_ridge_policy(moments.sigma);
    Eigen::MatrixXd c(2, n);
    c.row(0).setOnes();
    c.row(1) = moments.mu.transpose();
    Eigen::VectorXd d(2);
    d << 1.0, target_return;

    const detail::QpResult qp = detail::solve_nonneg_qp(ridge.sigma, c, d, w0);
    if (qp.kkt_residual > 1e-8) {
        throw NumericError("min_variance_for_target: KKT residual " +
                           std::to_string(qp.kkt_residual) + " exceeds 1e-8");
    }
    MvpSolution out;
    out.ridge_applied = ridge.applied;
    out.condition = ridge.condition_before;
    out.iterations = qp.iterations;
    out.weights.universe = moments.assets;
    out.weights.weights = qp.w;
    out.weights.long_only = true;
    out.variance = qp.w.dot(moments.sigma * qp.w);
    return out;
}

}  // namespace amvp::optimize
