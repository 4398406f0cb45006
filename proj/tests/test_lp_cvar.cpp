#include <cmath>

#include "amvp/cvar.hpp"
#include "amvp/errors.hpp"
#include "amvp/lp.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace amvp;
using optimize::kLpInf;
using optimize::LpProblem;
using optimize::LpStatus;

TEST_CASE("simplex solves textbook LPs") {
    SUBCASE("two-variable maximization with slacks") {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), obj 36.
        LpProblem p;
        p.a.resize(3, 5);
        p.a << 1, 0, 1, 0, 0,
               0, 2, 0, 1, 0,
               3, 2, 0, 0, 1;
        p.b = Eigen::Vector3d(4, 12, 18);
        p.c = Eigen::VectorXd::Zero(5);
        p.c(0) = 3;
        p.c(1) = 5;
        p.lower = Eigen::VectorXd::Zero(5);
        p.upper = Eigen::VectorXd::Constant(5, kLpInf);
        const auto sol = optimize::solve_lp(p);
        REQUIRE(sol.status == LpStatus::optimal);
        CHECK(sol.objective == doctest::Approx(36.0).epsilon(1e-10));
        CHECK(sol.x(0) == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(sol.x(1) == doctest::Approx(6.0).epsilon(1e-10));
    }
    SUBCASE("equality constraint with bounded variables") {
        // max x1 + 2x2 s.t. x1 + x2 = 1, 0 <= x1 <= 1, 0 <= x2 <= 0.4 -> (0.6, 0.4).
        LpProblem p;
        p.a.resize(1, 2);
        p.a << 1, 1;
        p.b = Eigen::VectorXd::Ones(1);
        p.c.resize(2);
        p.c << 1, 2;
        p.lower = Eigen::VectorXd::Zero(2);
        p.upper.resize(2);
        p.upper << 1.0, 0.4;
        const auto sol = optimize::solve_lp(p);
        REQUIRE(sol.status == LpStatus::optimal);
        CHECK(sol.objective == doctest::Approx(1.4).epsilon(1e-12));
        CHECK(sol.x(0) == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(sol.x(1) == doctest::Approx(0.4).epsilon(1e-12));
        // Row dual of the equality: marginal value of budget = 1 (x1's rate).
        CHECK(sol.y(0) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("infeasible system detected") {
        LpProblem p;
        p.a.resize(2, 1);
        p.a << 1, 1;
        p.b = Eigen::Vector2d(1, 2);  // x = 1 and x = 2 simultaneously
        p.c = Eigen::VectorXd::Zero(1);
        p.lower = Eigen::VectorXd::Zero(1);
        p.upper = Eigen::VectorXd::Constant(1, kLpInf);
        CHECK(optimize::solve_lp(p).status == LpStatus::infeasible);
    }
    SUBCASE("unbounded ray detected") {
        LpProblem p;
        p.a.resize(1, 2);
        p.a << 1, -1;
        p.b = Eigen::VectorXd::Zero(1);
        p.c.resize(2);
        p.c << 1, 0;
        p.lower = Eigen::VectorXd::Zero(2);
        p.upper = Eigen::VectorXd::Constant(2, kLpInf);
        CHECK(optimize::solve_lp(p).status == LpStatus::unbounded);
    }
    SUBCASE("free variable handled") {
        // max -x + y s.t. y - x = 2, y <= 5, x free -> x = 3, y = 5, obj 2.
        LpProblem p;
        p.a.resize(1, 2);
        p.a << -1, 1;
        p.b = Eigen::VectorXd::Constant(1, 2.0);
        p.c.resize(2);
        p.c << -1, 1;
        p.lower.resize(2);
        p.lower << -kLpInf, -kLpInf;
        p.upper.resize(2);
        p.upper << kLpInf, 5.0;
        const auto sol = optimize::solve_lp(p);
        REQUIRE(sol.status == LpStatus::optimal);
        CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-10));
    }
}

TEST_CASE("min_cvar_lp single-asset pinned example") {
    Eigen::MatrixXd scen(4, 1);
    scen << 0.10, 0.05, -0.20, 0.02;
    const auto sol = optimize::min_cvar_lp(scen, 0.75);
    CHECK(sol.weights.weights(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sol.cvar == doctest::Approx(0.20).epsilon(1e-12));
    CHECK(sol.alpha == 0.75);
}

TEST_CASE("min_cvar_lp equals the kink-scan reference on single-asset sets") {
    oracles::TestRng rng(24601);
    for (int rep = 0; rep < 60; ++rep) {
        const int s = rng.uniform_int(2, 12);
        Eigen::MatrixXd scen(s, 1);
        std::vector<double> losses;
        for (int k = 0; k < s; ++k) {
            scen(k, 0) = rng.uniform(-0.3, 0.3);
            losses.push_back(-scen(k, 0));
        }
        const double alpha = rng.uniform(0.05, 0.95);
        const auto sol = optimize::min_cvar_lp(scen, alpha);
        CHECK(sol.cvar == doctest::Approx(oracles::reference_cvar(losses, alpha)).epsilon(1e-11));
        // Integral tail: also equals the mean of the worst (1-alpha)*S losses.
        const int m = std::max(1, s / 4);
        const double alpha_int = 1.0 - static_cast<double>(m) / s;
        if (alpha_int > 0.0 && alpha_int < 1.0) {
            const auto sol2 = optimize::min_cvar_lp(scen, alpha_int);
            std::vector<double> sorted = losses;
            std::sort(sorted.rbegin(), sorted.rend());
            double tail = 0.0;
            for (int k = 0; k < m; ++k) tail += sorted[static_cast<std::size_t>(k)];
            CHECK(sol2.cvar == doctest::Approx(tail / m).epsilon(1e-10));
        }
    }
}

TEST_CASE("min_cvar_lp duplication invariance of the objective") {
    Eigen::MatrixXd scen(6, 2);
    scen << 0.10, 0.10, -0.07, -0.07, 0.02, 0.02, -0.15, -0.15, 0.04, 0.04, 0.01, 0.01;
    const auto dup = optimize::min_cvar_lp(scen, 0.8);
    const auto single = optimize::min_cvar_lp(scen.leftCols(1), 0.8);
    CHECK(dup.cvar == doctest::Approx(single.cvar).epsilon(1e-10));
}

TEST_CASE("min_cvar_lp beats or ties the simplex grid at N=3") {
    oracles::TestRng rng(777);
    for (int rep = 0; rep < 6; ++rep) {
        Eigen::MatrixXd scen(50, 3);
        for (int s = 0; s < 50; ++s) {
            for (int i = 0; i < 3; ++i) scen(s, i) = 0.01 * rng.normal() + (i - 1) * 0.001;
        }
        const auto sol = optimize::min_cvar_lp(scen, 0.9);
        const double grid = oracles::grid_min_cvar(scen, 0.9, 20);  // step 0.05
        CHECK(sol.cvar <= grid + 1e-10);
        // grid slack: coarse weights cannot be much better than the LP optimum
        CHECK(grid >= sol.cvar - 1e-10);
    }
}

TEST_CASE("cvar dominance in the confidence level") {
    oracles::TestRng rng(55);
    Eigen::MatrixXd scen(40, 3);
    for (int s = 0; s < 40; ++s) {
        for (int i = 0; i < 3; ++i) scen(s, i) = 0.02 * rng.normal();
    }
    const Eigen::VectorXd w = oracles::random_simplex(rng, 3);
    double previous = -1e9;
    for (double alpha : {0.5, 0.7, 0.9, 0.95, 0.99}) {
        const double value = optimize::cvar_of_weights(scen, w, alpha);
        CHECK(value >= previous - 1e-12);
        previous = value;
    }
}

TEST_CASE("min_cvar_lp flags undersampled tails and validates inputs") {
    Eigen::MatrixXd scen(4, 1);
    scen << 0.1, 0.0, -0.1, 0.05;
    CHECK(optimize::min_cvar_lp(scen, 0.99).tail_undersampled);
    CHECK_FALSE(optimize::min_cvar_lp(scen, 0.75).tail_undersampled);
    CHECK_THROWS_AS(optimize::min_cvar_lp(scen, 1.5), ConfigError);
    Eigen::MatrixXd one_row(1, 1);
    one_row << 0.1;
    CHECK_THROWS_AS(optimize::min_cvar_lp(one_row, 0.9), DataError);
}
