#include <cmath>

#include "amvp/adaptive.hpp"
#include "amvp/errors.hpp"
#include "amvp/moments.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace amvp;
using adaptive::AdaptiveConfig;
using adaptive::AdaptiveTrace;

namespace {

data::ReturnPanel make_panel(const Eigen::MatrixXd& returns) {
    data::ReturnPanel panel;
    panel.returns = returns;
    for (Eigen::Index i = 0; i < returns.cols(); ++i) panel.assets.push_back("A" + std::to_string(i + 1));
    for (Eigen::Index t = 0; t < returns.rows(); ++t) {
        panel.dates.push_back(data::Date::from_serial(18628 + t));
    }
    return panel;
}

// Zero-mean, mutually orthogonal, equal-norm columns: the sample covariance
// is exactly (scale^2 * T / (T-1)) * I.
data::ReturnPanel equal_variance_panel() {
    Eigen::MatrixXd h(4, 3);
    h << 1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, 1;
    return make_panel(0.01 * h);
}

data::ReturnPanel random_panel(oracles::TestRng& rng, int t_len, int n) {
    Eigen::MatrixXd returns(t_len, n);
    Eigen::VectorXd factor(t_len);
    for (int t = 0; t < t_len; ++t) factor(t) = rng.normal();
    for (int i = 0; i < n; ++i) {
        const double loading = rng.uniform(0.2, 0.8);
        const double idio = rng.uniform(0.005, 0.02);
        const double drift = rng.uniform(-0.001, 0.002);
        for (int t = 0; t < t_len; ++t) {
            returns(t, i) = drift + 0.01 * loading * factor(t) + idio * rng.normal();
        }
    }
    return make_panel(returns);
}

void check_trace_invariants(const AdaptiveTrace& trace) {
    REQUIRE(!trace.iterations.empty());
    for (std::size_t k = 0; k < trace.iterations.size(); ++k) {
        const auto& rec = trace.iterations[k];
        CHECK(rec.iteration == static_cast<int>(k) + 1);
        if (k > 0) {
            CHECK(rec.universe_size == trace.iterations[k - 1].universe_size + 1);
            CHECK(rec.risk <= trace.iterations[k - 1].risk + 1e-10);
        }
        CHECK(rec.weights.size() == static_cast<Eigen::Index>(rec.universe_size));
        CHECK(rec.weights.sum() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(rec.weights.minCoeff() >= -1e-12);
    }
    CHECK(trace.synthetic_count == static_cast<int>(trace.iterations.size()) - 1);
    CHECK(trace.final_universe.size() ==
          trace.iterations.front().universe_size + static_cast<std::size_t>(trace.synthetic_count));
}

}  // namespace

TEST_CASE("append_synthetic builds the weighted column") {
    Eigen::MatrixXd returns(3, 2);
    returns << 0.02, 0.04, -0.01, 0.03, 0.00, -0.02;
    const auto panel = make_panel(returns);

    optimize::PortfolioWeights pure;
    pure.universe = panel.assets;
    pure.weights = Eigen::Vector2d(1.0, 0.0);
    const auto projected = adaptive::append_synthetic(panel, pure, "SYN_1");
    CHECK(projected.n_assets() == 3);
    CHECK(projected.assets.back() == "SYN_1");
    for (int t = 0; t < 3; ++t) CHECK(projected.returns(t, 2) == returns(t, 0));

    optimize::PortfolioWeights half;
    half.universe = panel.assets;
    half.weights = Eigen::Vector2d(0.5, 0.5);
    const auto blended = adaptive::append_synthetic(panel, half, "SYN_1");
    CHECK(blended.returns(0, 2) == doctest::Approx(0.03).epsilon(1e-15));

    oracles::TestRng rng(99);
    Eigen::MatrixXd wide(10, 4);
    for (int t = 0; t < 10; ++t) {
        for (int i = 0; i < 4; ++i) wide(t, i) = rng.uniform(-0.05, 0.05);
    }
    const auto wide_panel = make_panel(wide);
    optimize::PortfolioWeights rw;
    rw.universe = wide_panel.assets;
    rw.weights = oracles::random_simplex(rng, 4);
    const auto appended = adaptive::append_synthetic(wide_panel, rw, "SYN_1");
    for (int t = 0; t < 10; ++t) {
        double dot = 0.0;
        for (int i = 0; i < 4; ++i) dot += rw.weights(i) * wide(t, i);
        CHECK(appended.returns(t, 4) == doctest::Approx(dot).epsilon(1e-15));
    }

    optimize::PortfolioWeights wrong;
    wrong.universe = {"A1"};
    wrong.weights = Eigen::VectorXd::Ones(1);
    CHECK_THROWS_AS(adaptive::append_synthetic(panel, wrong, "SYN_9"), DataError);
    CHECK_THROWS_WITH_AS(adaptive::append_synthetic(panel, half, "A2"),
                         doctest::Contains("duplicate"), DataError);
}

TEST_CASE("amvp_run converges at the first comparison on an equal-variance diagonal panel") {
    AdaptiveConfig config;
    config.epsilon = 1e-6;
    const auto trace = adaptive::amvp_run(equal_variance_panel(), config);
    REQUIRE(trace.iterations.size() == 2);
    CHECK(trace.converged);
    CHECK(trace.synthetic_count == 1);
    CHECK(trace.measure == adaptive::RiskMeasure::variance);
    // First solve is the equal-weight portfolio on an exact diagonal.
    for (int i = 0; i < 3; ++i) {
        CHECK(trace.iterations[0].weights(i) == doctest::Approx(1.0 / 3).epsilon(1e-9));
    }
    CHECK(std::fabs(trace.iterations[1].risk - trace.iterations[0].risk) < 1e-6);
    check_trace_invariants(trace);
}

TEST_CASE("amvp_run on a single effective asset stalls immediately") {
    Eigen::MatrixXd returns(6, 2);
    for (int t = 0; t < 6; ++t) {
        const double r = 0.01 * ((t % 3) - 1);
        returns(t, 0) = r;
        returns(t, 1) = r;
    }
    AdaptiveConfig config;
    config.epsilon = 1e-12;
    const auto trace = adaptive::amvp_run(make_panel(returns), config);
    REQUIRE(trace.iterations.size() == 2);
    CHECK(trace.converged);
    CHECK(trace.iterations[0].risk == doctest::Approx(trace.iterations[1].risk).epsilon(1e-12));
    CHECK(trace.iterations[0].ridge_applied);  // duplicated columns are singular
    check_trace_invariants(trace);
}

TEST_CASE("amvp_run 5-asset fixture: monotone risk, convergence, consistency") {
    oracles::TestRng rng(42);
    const auto panel = random_panel(rng, 80, 5);
    AdaptiveConfig config;
    config.epsilon = 1e-10;
    config.max_iterations = 25;
    const auto trace = adaptive::amvp_run(panel, config);
    CHECK(trace.converged);
    CHECK(trace.iterations.size() <= 25);
    check_trace_invariants(trace);
    CHECK(trace.iterations.back().risk <= trace.iterations.front().risk);

    // Feasibility inheritance + rate consistency, by replaying the augmentation.
    data::ReturnPanel current = panel;
    for (std::size_t k = 0; k + 1 < trace.iterations.size(); ++k) {
        const auto& rec = trace.iterations[k];
        optimize::PortfolioWeights w;
        w.universe = current.assets;
        w.weights = rec.weights;

        const auto moments = optimize::estimate_moments(current);
        CHECK(rec.rate == doctest::Approx(rec.weights.dot(moments.mu)).epsilon(1e-12));

        current = adaptive::append_synthetic(current, w, adaptive::synthetic_label(static_cast<int>(k) + 1));
        const auto augmented = optimize::estimate_moments(current);
        const double newest_var = augmented.sigma(augmented.sigma.rows() - 1, augmented.sigma.cols() - 1);
        CHECK(std::fabs(newest_var - rec.risk) < 1e-10);
    }
}

TEST_CASE("amvp_run terminates on random fixtures (property sample)") {
    oracles::TestRng rng(1234);
    for (int rep = 0; rep < 15; ++rep) {
        const int n = rng.uniform_int(2, 6);
        const int t_len = rng.uniform_int(n + 3, 90);
        AdaptiveConfig config;
        config.epsilon = rep % 2 == 0 ? 1e-10 : 1e-6;
        config.max_iterations = 40;
        const auto trace = adaptive::amvp_run(random_panel(rng, t_len, n), config);
        check_trace_invariants(trace);
    }
}

TEST_CASE("amcvarp_run concentrates on a dominant asset and stalls") {
    oracles::TestRng rng(31);
    Eigen::MatrixXd scen(60, 3);
    for (int s = 0; s < 60; ++s) {
        scen(s, 0) = 0.02 + 0.001 * rng.uniform(0.0, 1.0);  // always the best return
        scen(s, 1) = -0.01 + 0.01 * rng.normal();
        scen(s, 2) = -0.02 + 0.02 * rng.normal();
    }
    AdaptiveConfig config;
    config.alpha = 0.9;
    config.epsilon = 1e-12;
    const auto trace = adaptive::amcvarp_run(scen, {"DOM", "B", "C"}, config);
    REQUIRE(trace.iterations.size() == 2);
    CHECK(trace.converged);
    CHECK(trace.measure == adaptive::RiskMeasure::cvar);
    CHECK(trace.iterations[0].weights(0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(trace.iterations[0].risk == doctest::Approx(trace.iterations[1].risk).epsilon(1e-10));
    check_trace_invariants(trace);
}

TEST_CASE("amcvarp_run is inert under duplicated columns") {
    oracles::TestRng rng(8);
    Eigen::MatrixXd scen(40, 2);
    for (int s = 0; s < 40; ++s) {
        const double r = 0.02 * rng.normal();
        scen(s, 0) = r;
        scen(s, 1) = r;
    }
    AdaptiveConfig config;
    config.alpha = 0.85;
    config.epsilon = 1e-12;
    const auto trace = adaptive::amcvarp_run(scen, {}, config);
    CHECK(trace.converged);
    for (const auto& rec : trace.iterations) {
        CHECK(rec.risk == doctest::Approx(trace.iterations[0].risk).epsilon(1e-10));
    }
}

TEST_CASE("amcvarp_run 3x200 fixture: monotone CVaR matching grid search") {
    oracles::TestRng rng(7);
    Eigen::MatrixXd scen(200, 3);
    for (int s = 0; s < 200; ++s) {
        const double common = 0.01 * rng.normal();
        scen(s, 0) = common + 0.01 * rng.normal();
        scen(s, 1) = 0.5 * common + 0.02 * rng.normal();
        scen(s, 2) = -0.2 * common + 0.015 * rng.normal() + 0.001;
    }
    AdaptiveConfig config;
    config.alpha = 0.95;
    config.epsilon = 1e-9;
    const auto trace = adaptive::amcvarp_run(scen, {}, config);
    check_trace_invariants(trace);
    CHECK(trace.converged);

    // Synthetic columns are convex combinations, so the final CVaR matches the
    // original-universe optimum; the coarse grid tracks it within its slack.
    const double grid = oracles::grid_min_cvar(scen, 0.95, 50);  // step 0.02
    const double final_cvar = trace.iterations.back().risk;
    CHECK(final_cvar <= grid + 1e-10);
    const double slack = 0.03 * scen.cwiseAbs().maxCoeff();
    CHECK(grid <= final_cvar + slack);

    // CVaR feasibility inheritance: weight 1 on the newest synthetic column.
    Eigen::MatrixXd current = scen;
    for (std::size_t k = 0; k + 1 < trace.iterations.size(); ++k) {
        Eigen::MatrixXd next(current.rows(), current.cols() + 1);
        next.leftCols(current.cols()) = current;
        next.rightCols(1) = current * trace.iterations[k].weights;
        current = next;
        Eigen::VectorXd corner = Eigen::VectorXd::Zero(current.cols());
        corner(current.cols() - 1) = 1.0;
        const double inherited = optimize::cvar_of_weights(current, corner, config.alpha);
        CHECK(std::fabs(inherited - trace.iterations[k].risk) < 1e-10);
    }
}

TEST_CASE("static_rate compounds the final per-period rate") {
    AdaptiveTrace trace;
    adaptive::IterationRecord rec;
    rec.iteration = 1;
    rec.universe_size = 2;
    rec.weights = Eigen::Vector2d(0.5, 0.5);

    rec.rate = 0.0;
    trace.iterations = {rec};
    CHECK(adaptive::static_rate(trace, 252) == 0.0);

    trace.iterations[0].rate = 0.001;
    CHECK(adaptive::static_rate(trace, 252) ==
          doctest::Approx(std::pow(1.001, 252) - 1.0).epsilon(1e-14));
    CHECK(adaptive::static_rate(trace, 252) == doctest::Approx(0.2864340443).epsilon(1e-8));

    trace.iterations[0].rate = -0.0005;
    CHECK(adaptive::static_rate(trace, 365) ==
          doctest::Approx(std::pow(0.9995, 365) - 1.0).epsilon(1e-14));
    CHECK(adaptive::static_rate(trace, 365) == doctest::Approx(-0.1668533819).epsilon(1e-8));

    trace.iterations.clear();
    CHECK_THROWS_AS(adaptive::static_rate(trace, 252), DataError);
}

TEST_CASE("adaptive config validation rejects bad fields") {
    AdaptiveConfig config;
    config.epsilon = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.epsilon = 1e-8;
    config.max_iterations = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.max_iterations = 10;
    config.alpha = 1.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.alpha = 0.99;
    config.annualization_factor = 300;
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("amvp_run attaches the iteration index to optimizer errors") {
    // A panel with a NaN violates the return invariants before any solve.
    Eigen::MatrixXd returns(5, 2);
    returns.setConstant(0.01);
    returns(2, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(adaptive::amvp_run(make_panel(returns), AdaptiveConfig{}), DataError);
}
