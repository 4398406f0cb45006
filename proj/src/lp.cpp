#include "amvp/lp.hpp"

#include <cmath>
#include <vector>

#include "amvp/errors.hpp"

namespace amvp::optimize {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

enum class VarState : unsigned char { at_lower, at_upper, basic, free_zero };

struct Simplex {
    // Columns 0..n-1 are structural, n..n+m-1 artificial.
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    Eigen::VectorXd cost;
    Eigen::VectorXd x;
    std::vector<VarState> state;
    std::vector<Eigen::Index> basis;  // basis[row] = variable index
    Eigen::MatrixXd basis_inverse;
    Eigen::Index n_struct = 0;
    Eigen::Index m = 0;
    int iterations = 0;
    int degenerate_streak = 0;

    Eigen::Index total() const { return n_struct + m; }

    void refactorize() {
        Eigen::MatrixXd basis_matrix(m, m);
        for (Eigen::Index r = 0; r < m; ++r) basis_matrix.col(r) = a.col(basis[static_cast<std::size_t>(r)]);
        basis_inverse = basis_matrix.fullPivLu().inverse();
        recompute_basic_values();
    }

    void recompute_basic_values() {
        Eigen::VectorXd rhs = b;
        for (Eigen::Index j = 0; j < total(); ++j) {
            if (state[static_cast<std::size_t>(j)] == VarState::basic) continue;
            if (x(j) != 0.0) rhs -= a.col(j) * x(j);
        }
        const Eigen::VectorXd xb = basis_inverse * rhs;
        for (Eigen::Index r = 0; r < m; ++r) x(basis[static_cast<std::size_t>(r)]) = xb(r);
    }

    Eigen::VectorXd duals() const {
        Eigen::VectorXd cb(m);
        for (Eigen::Index r = 0; r < m; ++r) cb(r) = cost(basis[static_cast<std::size_t>(r)]);
        return basis_inverse.transpose() * cb;
    }

    // One simplex iteration; returns false when no eligible entering column
    // exists (current basis optimal for `cost`).
    bool iterate(bool bland, bool* unbounded) {
        const Eigen::VectorXd y = duals();
        const Eigen::VectorXd reduced = cost - a.transpose() * y;

        Eigen::Index entering = -1;
        double best_score = 0.0;
        int direction = 0;
        const double d_tol = 1e-9 * (1.0 + cost.cwiseAbs().maxCoeff());
        for (Eigen::Index j = 0; j < total(); ++j) {
            const VarState s = state[static_cast<std::size_t>(j)];
            if (s == VarState::basic) continue;
            if (lower(j) == upper(j)) continue;  // pinned (phase-2 artificials)
            int dir = 0;
            if (s == VarState::at_lower && reduced(j) > d_tol) dir = +1;
            else if (s == VarState::at_upper && reduced(j) < -d_tol) dir = -1;
            else if (s == VarState::free_zero && std::fabs(reduced(j)) > d_tol) {
                dir = reduced(j) > 0.0 ? +1 : -1;
            }
            if (dir == 0) continue;
            if (bland) {
                entering = j;
                direction = dir;
                break;
            }
            const double score = std::fabs(reduced(j));
            if (score > best_score) {
                best_score = score;
                entering = j;
                direction = dir;
            }
        }
        if (entering < 0) return false;

        const Eigen::VectorXd u = basis_inverse * a.col(entering);

        // Ratio test: largest step t >= 0 before a basic variable or the
        // entering variable itself hits a bound.
        double t_max = kLpInf;
        Eigen::Index leaving_row = -1;
        if (std::isfinite(lower(entering)) && std::isfinite(upper(entering))) {
            t_max = upper(entering) - lower(entering);
        }
        for (Eigen::Index r = 0; r < m; ++r) {
            const double g = direction * u(r);  // basic r moves at rate -g
            const Eigen::Index var = basis[static_cast<std::size_t>(r)];
            double limit = kLpInf;
            if (g > kPivotTol && std::isfinite(lower(var))) {
                limit = (x(var) - lower(var)) / g;
            } else if (g < -kPivotTol && std::isfinite(upper(var))) {
                limit = (upper(var) - x(var)) / (-g);
            }
            if (limit < t_max - 1e-15 ||
                (leaving_row >= 0 && limit <= t_max + 1e-15 &&
                 var < basis[static_cast<std::size_t>(leaving_row)])) {
                t_max = std::max(limit, 0.0);
                leaving_row = r;
            }
        }
        if (std::isinf(t_max)) {
            *unbounded = true;
            return false;
        }

        degenerate_streak = t_max <= 1e-13 ? degenerate_streak + 1 : 0;

        // Apply the step.
        x(entering) += direction * t_max;
        for (Eigen::Index r = 0; r < m; ++r) {
            x(basis[static_cast<std::size_t>(r)]) -= direction * t_max * u(r);
        }

        if (leaving_row < 0) {
            // Bound-to-bound flip of the entering variable; basis unchanged.
            state[static_cast<std::size_t>(entering)] =
                direction > 0 ? VarState::at_upper : VarState::at_lower;
        } else {
            const Eigen::Index leaving = basis[static_cast<std::size_t>(leaving_row)];
            const double g = direction * u(leaving_row);
            state[static_cast<std::size_t>(leaving)] = g > 0.0 ? VarState::at_lower : VarState::at_upper;
            x(leaving) = g > 0.0 ? lower(leaving) : upper(leaving);
            state[static_cast<std::size_t>(entering)] = VarState::basic;
            basis[static_cast<std::size_t>(leaving_row)] = entering;

            // Product-form update of the explicit inverse.
            const double pivot = u(leaving_row);
            basis_inverse.row(leaving_row) /= pivot;
            for (Eigen::Index r = 0; r < m; ++r) {
                if (r == leaving_row) continue;
                const double factor = u(r);
                if (factor != 0.0) basis_inverse.row(r) -= factor * basis_inverse.row(leaving_row);
            }
        }
        ++iterations;
        if (iterations % 100 == 0) refactorize();
        return true;
    }

    LpStatus run(int max_iterations) {
        bool unbounded = false;
        while (iterations < max_iterations) {
            const bool bland = degenerate_streak > static_cast<int>(2 * m + 20);
            if (!iterate(bland, &unbounded)) {
                return unbounded ? LpStatus::unbounded : LpStatus::optimal;
            }
        }
        return LpStatus::iteration_limit;
    }
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem) {
    const Eigen::Index m = problem.a.rows();
    const Eigen::Index n = problem.a.cols();
    if (problem.b.size() != m || problem.c.size() != n || problem.lower.size() != n ||
        problem.upper.size() != n) {
        throw NumericError("solve_lp: inconsistent problem dimensions");
    }

    Simplex s;
    s.m = m;
    s.n_struct = n;
    s.a.resize(m, n + m);
    s.a.leftCols(n) = problem.a;
    s.b = problem.b;
    s.lower.resize(n + m);
    s.upper.resize(n + m);
    s.lower.head(n) = problem.lower;
    s.upper.head(n) = problem.upper;
    s.x = Eigen::VectorXd::Zero(n + m);
    s.state.assign(static_cast<std::size_t>(n + m), VarState::at_lower);

    // Nonbasic structurals start at a finite bound (or zero when free).
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::isfinite(problem.lower(j))) {
            s.x(j) = problem.lower(j);
            s.state[static_cast<std::size_t>(j)] = VarState::at_lower;
        } else if (std::isfinite(problem.upper(j))) {
            s.x(j) = problem.upper(j);
            s.state[static_cast<std::size_t>(j)] = VarState::at_upper;
        } else {
            s.x(j) = 0.0;
            s.state[static_cast<std::size_t>(j)] = VarState::free_zero;
        }
    }

    // Artificial columns carry the initial residual with non-negative values.
    Eigen::VectorXd residual = problem.b;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (s.x(j) != 0.0) residual -= problem.a.col(j) * s.x(j);
    }
    s.basis.resize(static_cast<std::size_t>(m));
    s.a.rightCols(m).setZero();
    for (Eigen::Index r = 0; r < m; ++r) {
        const double sign = residual(r) >= 0.0 ? 1.0 : -1.0;
        s.a(r, n + r) = sign;
        s.lower(n + r) = 0.0;
        s.upper(n + r) = kLpInf;
        s.x(n + r) = std::fabs(residual(r));
        s.state[static_cast<std::size_t>(n + r)] = VarState::basic;
        s.basis[static_cast<std::size_t>(r)] = n + r;
    }
    s.refactorize();

    const int max_iterations = 20000 + static_cast<int>(10 * n);
    LpSolution out;

    // Phase 1: drive the artificial infeasibility to zero.
    s.cost = Eigen::VectorXd::Zero(n + m);
    s.cost.tail(m).setConstant(-1.0);
    LpStatus status = s.run(max_iterations);
    out.iterations = s.iterations;
    if (status == LpStatus::iteration_limit) {
        out.status = status;
        return out;
    }
    double infeasibility = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) infeasibility += s.x(n + r) >= 0.0 ? s.x(n + r) : 0.0;
    const double b_scale = 1.0 + problem.b.cwiseAbs().maxCoeff();
    if (infeasibility > kFeasTol * b_scale) {
        out.status = LpStatus::infeasible;
        return out;
    }

    // Phase 2: pin the artificials and optimize the real objective.
    s.upper.tail(m).setZero();
    s.cost.setZero();
    s.cost.head(n) = problem.c;
    status = s.run(max_iterations);
    out.iterations = s.iterations;
    out.status = status;
    if (status != LpStatus::optimal) return out;

    s.refactorize();  // final polish before extracting the solution
    out.x = s.x.head(n);
    out.y = s.duals();
    out.objective = problem.c.dot(out.x);
    return out;
}

}  // namespace amvp::optimize
