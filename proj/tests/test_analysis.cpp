#include <cmath>
#include <numeric>

#include "amvp/arfima_figarch.hpp"
#include "amvp/chow.hpp"
#include "amvp/errors.hpp"
#include "amvp/lrd.hpp"
#include "amvp/nig.hpp"
#include "amvp/rolling.hpp"
#include "amvp/spearman.hpp"
#include "amvp/special.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace amvp;
using analysis::RateSeries;

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

RateSeries series_from(const std::vector<double>& values) {
    RateSeries s;
    s.values = values;
    for (std::size_t t = 0; t < values.size(); ++t) {
        s.dates.push_back(data::Date::from_serial(19000 + static_cast<std::int64_t>(t)));
    }
    s.window = 1;
    s.source = "historical";
    return s;
}

// AR(1) path with an optional intercept jump at the midpoint.
std::vector<double> ar1_series(oracles::TestRng& rng, std::size_t n, double phi, double sd,
                               double jump = 0.0) {
    std::vector<double> y(n);
    double prev = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double intercept = (jump != 0.0 && t >= n / 2) ? jump : 0.0;
        prev = intercept + phi * prev + sd * rng.normal();
        y[t] = prev;
    }
    return y;
}

}  // namespace

TEST_CASE("special functions match frozen references") {
    CHECK(special::f_cdf(1.0, 2, 10) == doctest::Approx(0.5981224279835391).epsilon(1e-12));
    CHECK(special::f_cdf(3.5, 2, 40) == doctest::Approx(0.9602586452428509).epsilon(1e-12));
    CHECK(special::f_cdf(0.2, 2, 396) == doctest::Approx(0.18118659832277134).epsilon(1e-12));
    CHECK(special::student_t_cdf(2.0, 5) == doctest::Approx(0.9490302605850709).epsilon(1e-12));
    CHECK(special::student_t_cdf(-1.3, 17) == doctest::Approx(0.10547590694376349).epsilon(1e-12));
    CHECK(special::student_t_cdf(0.5, 3) == doctest::Approx(0.6742760175759246).epsilon(1e-12));
    CHECK(special::f_cdf(0.0, 2, 10) == 0.0);
    CHECK(special::f_cdf(-1.0, 2, 10) == 0.0);
}

TEST_CASE("rolling_amrr window shapes and degenerate panels") {
    adaptive::AdaptiveConfig config;
    config.epsilon = 1e-12;
    config.max_iterations = 10;

    // Constant-return panel: every window's rate equals the constant.
    const double c = 0.004;
    const auto constant = make_panel(Eigen::MatrixXd::Constant(30, 2, c));
    const auto rolled = analysis::rolling_amrr(constant, 10, config, false, Exec::serial);
    CHECK(rolled.series.values.size() == 21);  // T - P + 1
    CHECK(rolled.failures.empty());
    for (double v : rolled.series.values) CHECK(v == doctest::Approx(c).epsilon(1e-12));
    CHECK(rolled.series.dates.front() == constant.dates[9]);
    CHECK(rolled.series.dates.back() == constant.dates.back());

    // T == P: a single window equal to the full-sample static rate.
    oracles::TestRng rng(2020);
    Eigen::MatrixXd returns(14, 2);
    for (int t = 0; t < 14; ++t) {
        returns(t, 0) = 0.01 * rng.normal();
        returns(t, 1) = 0.0005 + 0.02 * rng.normal();
    }
    const auto panel = make_panel(returns);
    const auto single = analysis::rolling_amrr(panel, 14, config, false, Exec::serial);
    CHECK(single.series.values.size() == 1);
    const auto full_trace = adaptive::amvp_run(panel, config);
    CHECK(single.series.values[0] == doctest::Approx(full_trace.final_record().rate).epsilon(1e-14));

    // Length property across several (T, P) pairs.
    for (int window : {8, 11, 14}) {
        const auto r = analysis::rolling_amrr(panel, window, config, true, Exec::serial);
        CHECK(r.series.values.size() == static_cast<std::size_t>(14 - window + 1));
    }

    CHECK_THROWS_AS(analysis::rolling_amrr(panel, 3, config, false, Exec::serial), ConfigError);
    CHECK_THROWS_AS(analysis::rolling_amrr(panel, 15, config, false, Exec::serial), DataError);
}

TEST_CASE("rolling_amrr matches window-by-window recomputation across a regime shift") {
    oracles::TestRng rng(606);
    Eigen::MatrixXd returns(60, 2);
    for (int t = 0; t < 60; ++t) {
        const double scale = t < 30 ? 0.005 : 0.025;  // variance regime shift
        returns(t, 0) = 0.001 + scale * rng.normal();
        returns(t, 1) = 0.0005 + 0.01 * rng.normal();
    }
    const auto panel = make_panel(returns);
    adaptive::AdaptiveConfig config;
    config.epsilon = 1e-10;
    config.max_iterations = 15;

    const auto rolled = analysis::rolling_amrr(panel, 12, config, false, Exec::parallel);
    REQUIRE(rolled.series.values.size() == 49);
    for (std::size_t k = 0; k < rolled.series.values.size(); ++k) {
        data::ReturnPanel window;
        window.assets = panel.assets;
        window.calendar = panel.calendar;
        window.dates.assign(panel.dates.begin() + static_cast<std::ptrdiff_t>(k),
                            panel.dates.begin() + static_cast<std::ptrdiff_t>(k) + 12);
        window.returns = panel.returns.middleRows(static_cast<Eigen::Index>(k), 12);
        const auto trace = adaptive::amvp_run(window, config);
        CHECK(rolled.series.values[k] == doctest::Approx(trace.final_record().rate).epsilon(1e-14));
    }

    // Serial and parallel execution produce identical series.
    const auto serial = analysis::rolling_amrr(panel, 12, config, false, Exec::serial);
    REQUIRE(serial.series.values.size() == rolled.series.values.size());
    for (std::size_t k = 0; k < serial.series.values.size(); ++k) {
        CHECK(serial.series.values[k] == rolled.series.values[k]);
    }
}

TEST_CASE("chow_scan: alternating halves give F = 0, p = 1 at the midpoint") {
    std::vector<double> values;
    for (int rep = 0; rep < 20; ++rep) {
        values.push_back(0.01);
        values.push_back(-0.02);
    }
    const auto series = series_from(values);
    const auto results = analysis::chow_scan(series, 5, false, nullptr, Exec::serial);
    REQUIRE(!results.empty());
    bool checked_midpoint = false;
    for (const auto& r : results) {
        if (r.n_left == r.n_right || r.n_left + 1 == r.n_right) {
            CHECK(r.f_stat == doctest::Approx(0.0));
            CHECK(r.p_value == doctest::Approx(1.0));
            checked_midpoint = true;
        }
        CHECK(r.p_value >= 0.0);
        CHECK(r.p_value <= 1.0);
        CHECK(r.f_stat >= 0.0);
    }
    CHECK(checked_midpoint);
}

TEST_CASE("chow_scan: intercept jump is detected with the reference F value") {
    oracles::TestRng rng(11);
    const double sd = 0.01;
    const auto values = ar1_series(rng, 240, 0.4, sd, 5.0 * sd);
    const auto series = series_from(values);
    const auto results = analysis::chow_scan(series, 30, false, nullptr, Exec::serial);

    // Reference computation at the exact midpoint split.
    const std::size_t n_obs = values.size() - 1;
    std::vector<double> x(values.begin(), values.end() - 1);
    std::vector<double> y(values.begin() + 1, values.end());
    const std::size_t tau = values.size() / 2;
    const double ssr_full = oracles::ols_ssr(x, y);
    const double ssr_left = oracles::ols_ssr({x.begin(), x.begin() + tau}, {y.begin(), y.begin() + tau});
    const double ssr_right = oracles::ols_ssr({x.begin() + tau, x.end()}, {y.begin() + tau, y.end()});
    const double dof = static_cast<double>(n_obs) - 4.0;
    const double f_reference =
        ((ssr_full - ssr_left - ssr_right) / 2.0) / ((ssr_left + ssr_right) / dof);

    bool found = false;
    for (const auto& r : results) {
        if (r.n_left == tau) {
            CHECK(r.f_stat == doctest::Approx(f_reference).epsilon(1e-10));
            CHECK(r.p_value < 0.001);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("chow_scan: single-regime AR(1) keeps the rejection fraction small") {
    oracles::TestRng rng(404);
    const auto series = series_from(ar1_series(rng, 300, 0.5, 0.01));
    const auto results = analysis::chow_scan(series, 30, false, nullptr, Exec::serial);
    REQUIRE(!results.empty());
    std::size_t rejections = 0;
    for (const auto& r : results) rejections += r.p_value < 0.05 ? 1 : 0;
    CHECK(static_cast<double>(rejections) / static_cast<double>(results.size()) <= 0.10);
}

TEST_CASE("chow_scan: mirrored series yields a mirrored break location") {
    oracles::TestRng rng(12);
    const double sd = 0.01;
    const auto values = ar1_series(rng, 200, 0.3, sd, 6.0 * sd);
    const auto forward = series_from(values);
    std::vector<double> reversed(values.rbegin(), values.rend());
    const auto backward = series_from(reversed);

    auto argmin_date_index = [](const std::vector<analysis::ChowResult>& results) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < results.size(); ++k) {
            if (results[k].p_value < results[best].p_value ||
                (results[k].p_value == results[best].p_value &&
                 results[k].f_stat > results[best].f_stat)) {
                best = k;
            }
        }
        return results[best].n_left;
    };
    const auto fwd = analysis::chow_scan(forward, 30, false, nullptr, Exec::serial);
    const auto bwd = analysis::chow_scan(backward, 30, false, nullptr, Exec::serial);
    const std::size_t n_obs = values.size() - 1;
    const std::size_t fwd_break = argmin_date_index(fwd);
    const std::size_t bwd_break = argmin_date_index(bwd);
    CHECK(std::llabs(static_cast<long long>(fwd_break) -
                     static_cast<long long>(n_obs - bwd_break)) <= 2);
}

TEST_CASE("chow_scan: bonferroni, parallel equality and error paths") {
    oracles::TestRng rng(5);
    const auto series = series_from(ar1_series(rng, 150, 0.4, 0.02));
    const auto plain = analysis::chow_scan(series, 20, false, nullptr, Exec::serial);
    const auto corrected = analysis::chow_scan(series, 20, true, nullptr, Exec::serial);
    REQUIRE(plain.size() == corrected.size());
    const auto n_tests = static_cast<double>(plain.size());
    for (std::size_t k = 0; k < plain.size(); ++k) {
        CHECK(corrected[k].p_value ==
              doctest::Approx(std::min(1.0, plain[k].p_value * n_tests)).epsilon(1e-12));
    }
    const auto parallel = analysis::chow_scan(series, 20, false, nullptr, Exec::parallel);
    REQUIRE(parallel.size() == plain.size());
    for (std::size_t k = 0; k < plain.size(); ++k) {
        CHECK(parallel[k].f_stat == plain[k].f_stat);
    }

    CHECK_THROWS_AS(analysis::chow_scan(series_from({0.1, 0.2, 0.3}), 30, false, nullptr, Exec::serial),
                    DataError);
    // Constant series: the full regression is singular.
    CHECK_THROWS_AS(
        analysis::chow_scan(series_from(std::vector<double>(100, 0.5)), 10, false, nullptr,
                            Exec::serial),
        DataError);
}

TEST_CASE("hurst identity and the pinned mapping") {
    CHECK(analysis::hurst_from_dv(0.8668) == 1.3668);  // exact in doubles
    CHECK(analysis::hurst_from_dv(0.0) == 0.5);
    oracles::TestRng rng(9);
    for (int rep = 0; rep < 50; ++rep) {
        const double dv = rng.uniform(0.0, 0.9999);
        CHECK(analysis::hurst_from_dv(dv) - dv == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("estimate_dv recovers simulated long memory (unit-scale check)") {
    scenarios::ArfimaFigarchParams params;
    params.omega = 1e-4;
    params.beta_v = 0.3;
    params.phi_v = 0.1;
    params.d_v = 0.4;
    Rng rng(mix_seed(314, 1));
    const auto path = scenarios::simulate_arfima_figarch_path(params, scenarios::near_gaussian_nig(0.0, 1.0),
                                                              2500, rng);
    const auto estimate = analysis::estimate_dv(path);
    CHECK(std::fabs(estimate.d_v - 0.4) <= 0.15);
    CHECK(estimate.hurst == analysis::hurst_from_dv(estimate.d_v));
    CHECK(estimate.method.substr(0, 11) == "figarch-qml");

    std::vector<double> small(100, 0.1);
    CHECK_THROWS_AS(analysis::estimate_dv(small), DataError);
}

TEST_CASE("log_transform is odd, monotone and pinned at e-1") {
    const std::vector<double> values = {0.0, std::exp(1.0) - 1.0, -0.5, 2.0, -2.0};
    const auto out = analysis::log_transform(values);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(out[3] == -out[4]);

    oracles::TestRng rng(21);
    std::vector<double> xs(50);
    for (auto& x : xs) x = rng.uniform(-5.0, 5.0);
    std::sort(xs.begin(), xs.end());
    const auto ys = analysis::log_transform(xs);
    for (std::size_t k = 1; k < ys.size(); ++k) CHECK(ys[k] > ys[k - 1]);

    std::vector<double> negated(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) negated[k] = -xs[k];
    const auto yneg = analysis::log_transform(negated);
    for (std::size_t k = 0; k < xs.size(); ++k) CHECK(yneg[k] == -ys[k]);
}

TEST_CASE("spearman: pinned cases, tie handling and monotone invariance") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0};
    const auto inc = analysis::spearman(x, x);
    CHECK(inc.rho == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inc.p_value == doctest::Approx(0.0).epsilon(1e-12));

    const std::vector<double> rev = {5.0, 4.0, 3.0, 2.0, 1.0};
    CHECK(analysis::spearman(x, rev).rho == doctest::Approx(-1.0).epsilon(1e-12));

    // One tie; frozen reference from an independent rank-then-Pearson run.
    const std::vector<double> xt = {1.0, 2.0, 2.0, 3.0, 4.0};
    const std::vector<double> yt = {0.5, 0.1, 0.4, 0.8, 0.9};
    const auto tied = analysis::spearman(xt, yt);
    CHECK(tied.rho == doctest::Approx(0.6668859288553503).epsilon(1e-12));
    CHECK(tied.p_value == doctest::Approx(0.21889398131323154).epsilon(1e-9));

    oracles::TestRng rng(3);
    std::vector<double> a(40);
    std::vector<double> b(40);
    for (std::size_t k = 0; k < a.size(); ++k) {
        a[k] = rng.uniform(-2.0, 2.0);
        b[k] = rng.uniform(-2.0, 2.0);
    }
    const auto base = analysis::spearman(a, b);
    std::vector<double> a_exp(a.size());
    std::vector<double> b_cube(b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        a_exp[k] = std::exp(a[k]);
        b_cube[k] = b[k] * b[k] * b[k];
    }
    CHECK(analysis::spearman(a_exp, b).rho == base.rho);
    CHECK(analysis::spearman(a, b_cube).rho == base.rho);
    CHECK(analysis::spearman(a_exp, b_cube).rho == base.rho);

    const std::vector<double> pair = {1.0, 2.0};
    const std::vector<double> flat = {1.0, 1.0, 1.0};
    const std::vector<double> trio = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(analysis::spearman(pair, pair), DataError);
    CHECK_THROWS_AS(analysis::spearman(flat, trio), DataError);
    CHECK_THROWS_AS(analysis::spearman(trio, pair), DataError);
}
