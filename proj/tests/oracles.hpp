#pragma once

// Independent reference implementations used to verify the optimizers and
// statistics. Everything here is deliberately brute-force and shares no code
// with the library paths under test.

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace oracles {

/// Exact minimum of w'Qw over the simplex grid {w = k * step, sum w = 1}.
/// Enumerates every prefix of the first N-2 coordinates; the closing pair
/// (w_{N-1}, w_N) lies on a line where the objective is a convex quadratic in
/// the integer grid index, so its exact grid minimum is at the clamped
/// neighbors of the vertex or at the ends. Supports 1 <= N <= 5.
double grid_min_variance(const Eigen::MatrixXd& q, int steps_total);

/// Plain full enumeration (no line trick); N <= 4, small step counts only.
/// Used to validate grid_min_variance.
double grid_min_variance_naive(const Eigen::MatrixXd& q, int steps_total);

/// Minimum variance over grid points whose expected return lies within
/// `band` of `target`. Full enumeration, N <= 3. Returns +inf when no grid
/// point falls inside the band.
double grid_min_variance_at_return(const Eigen::MatrixXd& q, const Eigen::VectorXd& mu,
                                   double target, double band, int steps_total);

/// CVaR of fixed weights by direct minimization of the Rockafellar-Uryasev
/// objective over every loss kink (O(S^2); exact for the discrete problem).
double reference_cvar(const std::vector<double>& losses, double alpha);

/// Minimum reference CVaR over the weight simplex grid. N <= 3.
double grid_min_cvar(const Eigen::MatrixXd& scenarios, double alpha, int steps_total);

/// Sample covariance via explicit double loops, divisor T-1.
Eigen::MatrixXd covariance_loops(const Eigen::MatrixXd& returns);

/// w' sigma w via explicit double loops.
double variance_loops(const Eigen::VectorXd& w, const Eigen::MatrixXd& sigma);

/// SSR of the OLS regression of y on (1, x); hand-rolled normal equations.
double ols_ssr(const std::vector<double>& x, const std::vector<double>& y);

/// Deterministic generator for random fixtures.
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    double normal() {
        // Marsaglia polar; consumption pattern irrelevant for fixtures.
        for (;;) {
            const double a = uniform(-1.0, 1.0);
            const double b = uniform(-1.0, 1.0);
            const double s = a * a + b * b;
            if (s > 0.0 && s < 1.0) return a * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Random positive-definite covariance with unit-scale variances.
Eigen::MatrixXd random_psd(TestRng& rng, int n, double scale = 1.0);

/// Random point on the simplex.
Eigen::VectorXd random_simplex(TestRng& rng, int n);

}  // namespace oracles
