#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "amvp/arfima_figarch.hpp"
#include "amvp/panel.hpp"
#include "amvp/parallel.hpp"

namespace amvp::scenarios {

/// Fitted model behind one simulated asset column.
struct AssetModel {
    std::string asset;
    ArfimaFigarchParams arfima;
    NigParams nig;
    bool nig_fallback = false;
    bool boundary = false;
};

/// S x N matrix of simulated per-period returns. Regenerating with the same
/// seed and provenance reproduces the matrix bit for bit.
struct ScenarioSet {
    Eigen::MatrixXd returns;
    std::vector<std::string> assets;
    std::uint64_t seed = 0;
    std::vector<AssetModel> provenance;

    std::size_t n_scenarios() const { return static_cast<std::size_t>(returns.rows()); }
    std::size_t n_assets() const { return static_cast<std::size_t>(returns.cols()); }
};

/// Simulates n_paths independent paths of t_len steps for a single asset and
/// stacks them row-wise (S = n_paths * t_len). Each path owns an RNG stream
/// derived from (seed, path index), so results do not depend on scheduling.
ScenarioSet simulate_paths(const ArfimaFigarchParams& params, const NigParams& innovations,
                           std::size_t t_len, std::size_t n_paths, std::uint64_t seed,
                           Exec exec = Exec::parallel);

/// Full forward-looking engine: per asset, fit_arfima_figarch + fit_nig +
/// simulate_paths, assembled column-wise. Cross-asset dependence is restored
/// by reordering each simulated column to match the ranks of a Gaussian
/// copula draw fitted to the historical rank correlations (Iman-Conover).
/// Any per-asset fit failure fails the panel, with all failures reported.
ScenarioSet build_scenario_panel(const data::ReturnPanel& panel, std::size_t t_len,
                                 std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace amvp::scenarios
