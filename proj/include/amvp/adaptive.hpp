#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "amvp/cvar.hpp"
#include "amvp/panel.hpp"
#include "amvp/qp.hpp"

namespace amvp::adaptive {

enum class RiskMeasure { variance, cvar };

/// Loop controls shared by the AMVP and AMCVaRP runs. epsilon compares
/// successive risk values (variance units for AMVP, CVaR units for AMCVaRP).
/// Defaults: 1e-20 suits historical panels, 1e-6 simulated scenarios.
struct AdaptiveConfig {
    double epsilon = 1e-20;
    int max_iterations = 50;
    double alpha = 0.99;  // CVaR level, AMCVaRP only
    int annualization_factor = 252;

    void validate() const;
};

/// One optimizer solve of the adaptive loop. weights spans the augmented
/// universe of that iteration; rate is the per-period expected return w'mu.
struct IterationRecord {
    int iteration = 0;  // 1-based
    std::size_t universe_size = 0;
    Eigen::VectorXd weights;
    double risk = 0.0;
    double rate = 0.0;
    bool ridge_applied = false;
};

/// Full record of an adaptive run. The risk sequence is non-increasing up to
/// solver tolerance: each augmented universe contains the previous optimum as
/// the newest synthetic column. synthetic_count equals the number of appended
/// columns, i.e. iterations completed before the stop.
struct AdaptiveTrace {
    std::vector<IterationRecord> iterations;
    std::vector<std::string> final_universe;
    bool converged = false;
    int synthetic_count = 0;
    RiskMeasure measure = RiskMeasure::variance;

    const IterationRecord& final_record() const;
};

/// Appends the weighted-combination column sum_i weights[i] * returns[:, i]
/// under the given label. Throws DataError on dimension mismatch or a
/// duplicate label.
data::ReturnPanel append_synthetic(const data::ReturnPanel& panel,
                                   const optimize::PortfolioWeights& weights,
                                   const std::string& label);

/// Adaptive minimum-variance loop: estimate moments, solve the constrained
/// MVP, record (variance, rate), append the optimum as a synthetic column,
/// repeat until |risk_k - risk_{k+1}| < epsilon or max_iterations solves.
AdaptiveTrace amvp_run(const data::ReturnPanel& panel, const AdaptiveConfig& config);

/// Same loop with the CVaR LP as the inner solver, over an S x N scenario
/// matrix; the appended column holds the optimal portfolio return per scenario.
AdaptiveTrace amcvarp_run(const Eigen::MatrixXd& scenarios, std::vector<std::string> assets,
                          const AdaptiveConfig& config);

/// Final iteration's per-period rate annualized by compounding:
/// (1 + rate)^factor - 1.
double static_rate(const AdaptiveTrace& trace, int annualization_factor);

/// Label of the k-th synthetic column.
std::string synthetic_label(int k);

}  // namespace amvp::adaptive
