#include "amvp/adaptive.hpp"

#include <algorithm>
#include <cmath>

#include "amvp/errors.hpp"
#include "amvp/moments.hpp"

namespace amvp::adaptive {

void AdaptiveConfig::validate() const {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
    if (annualization_factor != 252 && annualization_factor != 365) {
        throw ConfigError("annualization_factor must be 252 or 365");
    }
}

const IterationRecord& AdaptiveTrace::final_record() const {
    if (iterations.empty()) throw DataError("adaptive trace is empty");
    return iterations.back();
}

std::string synthetic_label(int k) { return "SYN_" + std::to_string(k); }

data::ReturnPanel append_synthetic(const data::ReturnPanel& panel,
                                   const optimize::PortfolioWeights& weights,
                                   const std::string& label) {
    if (static_cast<std::size_t>(weights.weights.size()) != panel.n_assets() ||
        weights.universe != panel.assets) {
        throw DataError("append_synthetic: weights do not match the panel universe");
    }
    if (std::find(panel.assets.begin(), panel.assets.end(), label) != panel.assets.end()) {
        throw DataError("append_synthetic: duplicate label '" + label + "'");
    }
    data::ReturnPanel out;
    out.dates = panel.dates;
    out.calendar = panel.calendar;
    out.assets = panel.assets;
    out.assets.push_back(label);
    out.returns.resize(panel.returns.rows(), panel.returns.cols() + 1);
    out.returns.leftCols(panel.returns.cols()) = panel.returns;
    out.returns.rightCols(1) = panel.returns * weights.weights;
    return out;
}

namespace {

// Shared loop skeleton: `solve` returns (weights, risk, rate, ridge flag) for
// the current universe; `augment` appends the synthetic column.
template <class Solve, class Augment>
AdaptiveTrace run_adaptive(std::vector<std::string> initial_universe, const AdaptiveConfig& config,
                           RiskMeasure measure, Solve&& solve, Augment&& augment) {
    config.validate();
    AdaptiveTrace trace;
    trace.measure = measure;
    trace.final_universe = std::move(initial_universe);

    for (int k = 1; k <= config.max_iterations; ++k) {
        IterationRecord record;
        record.iteration = k;
        record.universe_size = trace.final_universe.size();
        try {
            solve(record);
        } catch (const NumericError& e) {
            throw NumericError("iteration " + std::to_string(k) + ": " + e.what());
        }
        trace.iterations.push_back(record);

        if (k >= 2) {
            const double prev = trace.iterations[static_cast<std::size_t>(k - 2)].risk;
            if (std::fabs(prev - record.risk) < config.epsilon) {
                trace.converged = true;
                break;
            }
        }
        if (k == config.max_iterations) break;

        const std::string label = synthetic_label(k);
        augment(record, label);
        trace.final_universe.push_back(label);
    }
    trace.synthetic_count = static_cast<int>(trace.iterations.size()) - 1;
    return trace;
}

}  // namespace

AdaptiveTrace amvp_run(const data::ReturnPanel& panel, const AdaptiveConfig& config) {
    panel.validate();
    if (panel.n_assets() < 2) throw DataError("amvp_run: need at least 2 assets");

    data::ReturnPanel current = panel;
    auto solve = [&](IterationRecord& record) {
        const optimize::MomentEstimate moments = optimize::estimate_moments(current);
        const optimize::MvpSolution sol = optimize::mvp_constrained(moments);
        record.weights = sol.weights.weights;
        record.risk = sol.variance;
        record.rate = sol.weights.weights.dot(moments.mu);
        record.ridge_applied = sol.ridge_applied;
    };
    auto augment = [&](const IterationRecord& record, const std::string& label) {
        optimize::PortfolioWeights w;
        w.weights = record.weights;
        w.universe = current.assets;
        current = append_synthetic(current, w, label);
    };
    return run_adaptive(panel.assets, config, RiskMeasure::variance, solve, augment);
}

AdaptiveTrace amcvarp_run(const Eigen::MatrixXd& scenarios, std::vector<std::string> assets,
                          const AdaptiveConfig& config) {
    if (scenarios.rows() < 2) throw DataError("amcvarp_run: need at least 2 scenarios");
    if (scenarios.cols() < 1) throw DataError("amcvarp_run: need at least 1 asset");
    if (assets.empty()) {
        for (Eigen::Index i = 0; i < scenarios.cols(); ++i) assets.push_back("A" + std::to_string(i + 1));
    }
    if (static_cast<Eigen::Index>(assets.size()) != scenarios.cols()) {
        throw DataError("amcvarp_run: asset labels do not match scenario columns");
    }

    Eigen::MatrixXd current = scenarios;
    std::vector<std::string> current_assets = assets;
    auto solve = [&](IterationRecord& record) {
        const optimize::CvarSolution sol = optimize::min_cvar_lp(current, config.alpha, current_assets);
        record.weights = sol.weights.weights;
        record.risk = sol.cvar;
        record.rate = sol.weights.weights.dot(current.colwise().mean().transpose());
        record.ridge_applied = false;
    };
    auto augment = [&](const IterationRecord& record, const std::string& label) {
        Eigen::MatrixXd next(current.rows(), current.cols() + 1);
        next.leftCols(current.cols()) = current;
        next.rightCols(1) = current * record.weights;
        current = std::move(next);
        current_assets.push_back(label);
    };
    return run_adaptive(std::move(assets), config, RiskMeasure::cvar, solve, augment);
}

double static_rate(const AdaptiveTrace& trace, int annualization_factor) {
    const double rate = trace.final_record().rate;
    return std::pow(1.0 + rate, static_cast<double>(annualization_factor)) - 1.0;
}

}  // namespace amvp::adaptive
