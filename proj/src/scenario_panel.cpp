#include "amvp/scenario_panel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "amvp/errors.hpp"
#include "amvp/ranks.hpp"

namespace amvp::scenarios {

namespace {

constexpr std::uint64_t kPathTag = 0x5041544853ULL;
constexpr std::uint64_t kAssetTag = 0x4153534554ULL;
constexpr std::uint64_t kCopulaTag = 0x434f50554cULL;

// Spearman rank correlation matrix of the historical columns, mapped to the
// Gaussian copula correlation 2 sin(pi rho / 6).
Eigen::MatrixXd copula_correlation(const Eigen::MatrixXd& returns) {
    const Eigen::Index n = returns.cols();
    const Eigen::Index t = returns.rows();
    Eigen::MatrixXd ranks(t, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::vector<double> col(returns.col(i).data(), returns.col(i).data() + t);
        const std::vector<double> r = average_ranks(col);
        for (Eigen::Index k = 0; k < t; ++k) ranks(k, i) = r[static_cast<std::size_t>(k)];
    }
    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd xi = ranks.col(i).array() - ranks.col(i).mean();
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const Eigen::VectorXd xj = ranks.col(j).array() - ranks.col(j).mean();
            const double denom = std::sqrt(xi.squaredNorm() * xj.squaredNorm());
            double rho = denom > 0.0 ? xi.dot(xj) / denom : 0.0;
            rho = std::clamp(2.0 * std::sin(std::numbers::pi * rho / 6.0), -1.0, 1.0);
            corr(i, j) = rho;
            corr(j, i) = rho;
        }
    }
    return corr;
}

// Factor L with L L' ~= corr, eigenvalues clipped so exactly comonotone
// columns (rho = 1) stay factorizable.
Eigen::MatrixXd copula_factor(const Eigen::MatrixXd& corr) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(corr);
    const Eigen::VectorXd clipped = eigen.eigenvalues().cwiseMax(1e-12);
    return eigen.eigenvectors() * clipped.cwiseSqrt().asDiagonal();
}

}  // namespace

ScenarioSet simulate_paths(const ArfimaFigarchParams& params, const NigParams& innovations,
                           std::size_t t_len, std::size_t n_paths, std::uint64_t seed, Exec exec) {
    if (t_len < 1) throw ConfigError("simulate_paths: t_len must be >= 1");
    if (n_paths < 1) throw ConfigError("simulate_paths: n_paths must be >= 1");
    validate_arfima_figarch(params);

    ScenarioSet out;
    out.seed = seed;
    out.assets = {"A1"};
    AssetModel model;
    model.asset = "A1";
    model.arfima = params;
    model.nig = innovations;
    out.provenance.push_back(model);
    out.returns.resize(static_cast<Eigen::Index>(n_paths * t_len), 1);

    for_each_index(n_paths, exec, [&](std::size_t p) {
        Rng rng(mix_seed(seed, kPathTag, p));
        const std::vector<double> path = simulate_arfima_figarch_path(params, innovations, t_len, rng);
        for (std::size_t k = 0; k < t_len; ++k) {
            out.returns(static_cast<Eigen::Index>(p * t_len + k), 0) = path[k];
        }
    });
    return out;
}

ScenarioSet build_scenario_panel(const data::ReturnPanel& panel, std::size_t t_len,
                                 std::uint64_t seed, Exec exec) {
    panel.validate();
    if (t_len < 2) throw ConfigError("build_scenario_panel: t_len must be >= 2");
    const std::size_t n = panel.n_assets();

    ScenarioSet out;
    out.seed = seed;
    out.assets = panel.assets;
    out.provenance.resize(n);
    out.returns.resize(static_cast<Eigen::Index>(t_len), static_cast<Eigen::Index>(n));

    std::vector<std::string> failures(n);
    for_each_index(n, exec, [&](std::size_t i) {
        try {
            const Eigen::VectorXd col = panel.returns.col(static_cast<Eigen::Index>(i));
            const std::span<const double> series(col.data(), static_cast<std::size_t>(col.size()));
            const ArfimaFigarchFit fit = fit_arfima_figarch(series);
            const NigFit nig = fit_nig(fit.std_residuals);

            AssetModel& model = out.provenance[i];
            model.asset = panel.assets[i];
            model.arfima = fit.params;
            model.nig = nig.params;
            model.nig_fallback = nig.moment_fallback;
            model.boundary = fit.boundary;

            Rng rng(mix_seed(seed, kAssetTag, i));
            const std::vector<double> sim =
                simulate_arfima_figarch_path(model.arfima, model.nig, t_len, rng);
            for (std::size_t k = 0; k < t_len; ++k) {
                out.returns(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = sim[k];
            }
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });

    std::ostringstream failure_report;
    bool any_failed = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (failures[i].empty()) continue;
        if (any_failed) failure_report << "; ";
        failure_report << panel.assets[i] << ": " << failures[i];
        any_failed = true;
    }
    if (any_failed) {
        throw NumericError("build_scenario_panel: per-asset fits failed [" + failure_report.str() +
                           "]");
    }

    // Iman-Conover reordering: each simulated column keeps its marginal but
    // takes the rank order of the corresponding Gaussian copula column.
    const Eigen::MatrixXd factor = copula_factor(copula_correlation(panel.returns));
    Rng copula_rng(mix_seed(seed, kCopulaTag));
    Eigen::MatrixXd gauss(static_cast<Eigen::Index>(t_len), static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < gauss.rows(); ++k) {
        for (Eigen::Index i = 0; i < gauss.cols(); ++i) gauss(k, i) = copula_rng.normal();
    }
    gauss = gauss * factor.transpose();

    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> sim_col(t_len);
        std::vector<double> gauss_col(t_len);
        for (std::size_t k = 0; k < t_len; ++k) {
            sim_col[k] = out.returns(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
            gauss_col[k] = gauss(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
        }
        std::sort(sim_col.begin(), sim_col.end());
        const std::vector<std::size_t> order = sort_permutation(gauss_col);
        // order[r] is the row holding the r-th smallest copula value; give it
        // the r-th smallest simulated value.
        for (std::size_t r = 0; r < t_len; ++r) {
            out.returns(static_cast<Eigen::Index>(order[r]), static_cast<Eigen::Index>(i)) = sim_col[r];
        }
    }
    return out;
}

}  // namespace amvp::scenarios
