#include "amvp/arfima_figarch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "amvp/errors.hpp"
#include "amvp/frac.hpp"
#include "amvp/nelder_mead.hpp"

namespace amvp::scenarios {

namespace {

constexpr double kPenalty = 1e12;
constexpr double kMeanBox = 0.98;   // |phi_m|, |theta_m|
constexpr double kDmBox = 0.49;     // |d_m|
constexpr double kVolBox = 0.98;    // beta_v, phi_v, d_v upper edge

double box_penalty(double value, double lo, double hi) {
    if (value < lo) return (lo - value) * (lo - value);
    if (value > hi) return (value - hi) * (value - hi);
    return 0.0;
}

}  // namespace

std::vector<double> figarch_arch_weights(double phi_v, double d_v, double beta_v, std::size_t n) {
    const std::vector<double> pi = frac_diff_weights(d_v, n + 1);
    std::vector<double> psi(n);
    double g_prev = 1.0;  // c_0 = pi_0 = 1
    for (std::size_t j = 1; j <= n; ++j) {
        const double c_j = pi[j] - phi_v * pi[j - 1];
        const double g_j = c_j + beta_v * g_prev;
        psi[j - 1] = -g_j;
        g_prev = g_j;
    }
    return psi;
}

void validate_arfima_figarch(const ArfimaFigarchParams& p) {
    if (!(std::fabs(p.phi_m) < 1.0)) throw NumericError("ARFIMA: |phi| must be < 1");
    if (!(std::fabs(p.theta_m) < 1.0)) throw NumericError("ARFIMA: |theta| must be < 1");
    if (!(p.d_m > -0.5 && p.d_m < 0.5)) throw NumericError("ARFIMA: d_m must be in (-0.5, 0.5)");
    if (!(p.omega > 0.0)) throw NumericError("FIGARCH: omega must be positive");
    if (!(p.d_v >= 0.0 && p.d_v < 1.0)) throw NumericError("FIGARCH: d_v must be in [0, 1)");
    if (!(std::fabs(p.beta_v) < 1.0)) throw NumericError("FIGARCH: |beta| must be < 1");
    const std::vector<double> psi = figarch_arch_weights(p.phi_v, p.d_v, p.beta_v, kTruncationLags);
    for (std::size_t j = 0; j < psi.size(); ++j) {
        if (psi[j] < -1e-12) {
            throw NumericError("FIGARCH: ARCH weight psi_" + std::to_string(j + 1) +
                               " is negative (" + std::to_string(psi[j]) + ")");
        }
    }
}

std::vector<double> simulate_arfima_figarch_path(const ArfimaFigarchParams& params,
                                                 const NigParams& innovations, std::size_t t_len,
                                                 Rng& rng) {
    if (t_len < 1) throw ConfigError("simulate path: t_len must be >= 1");
    validate_arfima_figarch(params);
    innovations.validate();

    const std::size_t total = kBurnIn + t_len;
    const std::vector<double> psi = figarch_arch_weights(params.phi_v, params.d_v, params.beta_v,
                                                         kTruncationLags);
    const double base = params.omega / (1.0 - params.beta_v);
    const double innov_mean = nig_mean(innovations);
    const double innov_sd = std::sqrt(nig_variance(innovations));
    const double ig_mean = innovations.delta_scale /
                           std::sqrt(innovations.alpha_tail * innovations.alpha_tail -
                                     innovations.beta_skew * innovations.beta_skew);
    const double ig_shape = innovations.delta_scale * innovations.delta_scale;

    std::vector<double> eps(total);
    std::vector<double> eps2(total);
    std::vector<double> arma(total);
    double prev_arma = 0.0;
    double prev_eps = 0.0;
    for (std::size_t t = 0; t < total; ++t) {
        double sigma2 = base;
        const std::size_t lags = std::min(t, kTruncationLags);
        for (std::size_t j = 1; j <= lags; ++j) sigma2 += psi[j - 1] * eps2[t - j];
        if (!(sigma2 > 0.0)) {
            throw NumericError("simulate path: non-positive conditional variance at step " +
                               std::to_string(t));
        }
        const double mix = rng.inverse_gaussian(ig_mean, ig_shape);
        const double draw = innovations.mu_loc + innovations.beta_skew * mix +
                            std::sqrt(mix) * rng.normal();
        const double standardized = (draw - innov_mean) / innov_sd;
        eps[t] = std::sqrt(sigma2) * standardized;
        eps2[t] = eps[t] * eps[t];
        arma[t] = params.phi_m * prev_arma + eps[t] + params.theta_m * prev_eps;
        prev_arma = arma[t];
        prev_eps = eps[t];
    }

    // Fractional integration of the ARMA component, truncated like the filter.
    const std::vector<double> integ = frac_diff_weights(-params.d_m, kTruncationLags);
    std::vector<double> out(t_len);
    for (std::size_t t = kBurnIn; t < total; ++t) {
        const std::size_t lags = std::min(t + 1, kTruncationLags);
        double acc = 0.0;
        for (std::size_t j = 0; j < lags; ++j) acc += integ[j] * arma[t - j];
        out[t - kBurnIn] = params.mean_const + acc;
    }
    return out;
}

namespace {

// Conditional-sum-of-squares residuals of the ARFIMA(1, d, 1) mean equation.
double css_sse(std::span<const double> y, double phi, double theta, double d, double mu,
               std::vector<double>* residuals = nullptr) {
    std::vector<double> demeaned(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) demeaned[t] = y[t] - mu;
    const std::vector<double> u = apply_frac_filter(demeaned, d, kTruncationLags);
    double sse = 0.0;
    double u_prev = 0.0;
    double eps_prev = 0.0;
    if (residuals) residuals->resize(y.size());
    for (std::size_t t = 0; t < u.size(); ++t) {
        const double eps = u[t] - phi * u_prev - theta * eps_prev;
        sse += eps * eps;
        if (residuals) (*residuals)[t] = eps;
        u_prev = u[t];
        eps_prev = eps;
    }
    return sse;
}

struct Stage1Result {
    double phi = 0.0;
    double theta = 0.0;
    double d = 0.0;
    double mu = 0.0;
    double sse = 0.0;
    bool boundary = false;
};

Stage1Result fit_stage1(std::span<const double> y, double sample_mean, double sample_sd) {
    const auto n = static_cast<double>(y.size());
    const double mu_step = std::max(sample_sd / 10.0, 1e-8);

    auto objective_full = [&](const Eigen::VectorXd& x) {
        const double violation = box_penalty(x(0), -kMeanBox, kMeanBox) +
                                 box_penalty(x(1), -kMeanBox, kMeanBox) +
                                 box_penalty(x(2), -kDmBox, kDmBox);
        if (violation > 0.0) return kPenalty * (1.0 + violation);
        return css_sse(y, x(0), x(1), x(2), x(3));
    };
    // (phi, theta) trade off against d along near-cancellation ridges, so the
    // full model overfits short-memory data; fit the restricted spec too and
    // let BIC arbitrate.
    auto objective_restricted = [&](const Eigen::VectorXd& x) {
        const double violation = box_penalty(x(0), -kDmBox, kDmBox);
        if (violation > 0.0) return kPenalty * (1.0 + violation);
        return css_sse(y, 0.0, 0.0, x(0), x(1));
    };

    Stage1Result full;
    full.sse = std::numeric_limits<double>::infinity();
    const double starts[][3] = {{0.0, 0.0, 0.0}, {0.2, 0.0, 0.25}, {-0.2, 0.2, 0.1}, {0.4, -0.3, 0.4}};
    Eigen::VectorXd step(4);
    step << 0.2, 0.2, 0.1, mu_step;
    for (const auto& s : starts) {
        Eigen::VectorXd x0(4);
        x0 << s[0], s[1], s[2], sample_mean;
        detail::NmOptions opts;
        opts.max_evals = 450;
        const auto r = detail::nelder_mead(objective_full, x0, step, opts);
        if (r.value < full.sse) {
            full.sse = r.value;
            full.phi = std::clamp(r.x(0), -kMeanBox, kMeanBox);
            full.theta = std::clamp(r.x(1), -kMeanBox, kMeanBox);
            full.d = std::clamp(r.x(2), -kDmBox, kDmBox);
            full.mu = r.x(3);
        }
    }

    Stage1Result restricted;
    restricted.sse = std::numeric_limits<double>::infinity();
    Eigen::VectorXd rstep(2);
    rstep << 0.1, mu_step;
    for (double d0 : {0.0, 0.25}) {
        Eigen::VectorXd x0(2);
        x0 << d0, sample_mean;
        detail::NmOptions opts;
        opts.max_evals = 250;
        const auto r = detail::nelder_mead(objective_restricted, x0, rstep, opts);
        if (r.value < restricted.sse) {
            restricted.sse = r.value;
            restricted.d = std::clamp(r.x(0), -kDmBox, kDmBox);
            restricted.mu = r.x(1);
        }
    }

    const double bic_full = n * std::log(full.sse / n) + 4.0 * std::log(n);
    const double bic_restricted = n * std::log(restricted.sse / n) + 2.0 * std::log(n);
    Stage1Result best = bic_restricted <= bic_full ? restricted : full;
    best.boundary = std::fabs(best.phi) > kMeanBox - 1e-4 || std::fabs(best.theta) > kMeanBox - 1e-4 ||
                    std::fabs(best.d) > kDmBox - 1e-4;
    return best;
}

// Gaussian quasi-log-likelihood (negated, up to constants) of FIGARCH(1,d,1).
double figarch_nll(std::span<const double> eps, double log_omega, double beta, double phi_v,
                   double d_v, std::vector<double>* sigma2_out = nullptr) {
    const double violation = box_penalty(beta, 0.0, kVolBox) + box_penalty(phi_v, 0.0, kVolBox) +
                             box_penalty(d_v, 0.0, kVolBox) + box_penalty(log_omega, -60.0, 10.0);
    if (violation > 0.0) return kPenalty * (1.0 + violation);
    const double omega = std::exp(log_omega);

    const std::vector<double> psi = figarch_arch_weights(phi_v, d_v, beta, kTruncationLags);
    double worst = 0.0;
    for (double w : psi) worst = std::min(worst, w);
    if (worst < -1e-12) return kPenalty * (1.0 - worst);

    const std::size_t t_len = eps.size();
    double presample = 0.0;
    for (double e : eps) presample += e * e;
    presample /= static_cast<double>(t_len);

    // Suffix sums let the pre-sample tail enter in O(1) per step.
    std::vector<double> psi_suffix(kTruncationLags + 1, 0.0);
    for (std::size_t j = kTruncationLags; j >= 1; --j) psi_suffix[j - 1] = psi_suffix[j] + psi[j - 1];

    const double base = omega / (1.0 - beta);
    if (sigma2_out) sigma2_out->resize(t_len);
    double nll = 0.0;
    for (std::size_t t = 0; t < t_len; ++t) {
        const std::size_t lags = std::min(t, kTruncationLags);
        double sigma2 = base + presample * psi_suffix[lags];
        for (std::size_t j = 1; j <= lags; ++j) sigma2 += psi[j - 1] * eps[t - j] * eps[t - j];
        if (!(sigma2 > 1e-300)) return kPenalty;
        nll += std::log(sigma2) + eps[t] * eps[t] / sigma2;
        if (sigma2_out) (*sigma2_out)[t] = sigma2;
    }
    return nll;
}

}  // namespace

FigarchFit fit_figarch(std::span<const double> demeaned) {
    if (demeaned.size() < 50) throw DataError("fit_figarch: need at least 50 observations");
    const auto [lo, hi] = std::minmax_element(demeaned.begin(), demeaned.end());
    if (*lo == *hi) throw DataError("fit_figarch: zero variance");
    double variance = 0.0;
    for (double e : demeaned) variance += e * e;
    variance /= static_cast<double>(demeaned.size());
    if (!(variance > 0.0)) throw DataError("fit_figarch: zero variance");

    auto objective = [&](const Eigen::VectorXd& x) {
        return figarch_nll(demeaned, x(0), x(1), x(2), x(3));
    };

    const double starts[][3] = {{0.3, 0.3, 0.3}, {0.1, 0.1, 0.1}, {0.5, 0.25, 0.55}};
    Eigen::VectorXd step(4);
    step << 0.5, 0.1, 0.1, 0.1;

    FigarchFit best;
    best.nll = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        Eigen::VectorXd x0(4);
        x0 << std::log(std::max(variance * (1.0 - s[0]), 1e-12)), s[0], s[1], s[2];
        detail::NmOptions opts;
        opts.max_evals = 400;
        const auto r = detail::nelder_mead(objective, x0, step, opts);
        if (r.value < best.nll) {
            best.nll = r.value;
            best.params.omega = std::exp(std::clamp(r.x(0), -60.0, 10.0));
            best.params.beta_v = std::clamp(r.x(1), 0.0, kVolBox);
            best.params.phi_v = std::clamp(r.x(2), 0.0, kVolBox);
            best.params.d_v = std::clamp(r.x(3), 0.0, kVolBox);
        }
    }
    if (!std::isfinite(best.nll) || best.nll >= kPenalty) {
        throw NumericError("fit_figarch: optimizer failed to find a feasible likelihood (best " +
                           std::to_string(best.nll) + ")");
    }
    best.boundary = best.params.beta_v > kVolBox - 1e-4 || best.params.phi_v > kVolBox - 1e-4 ||
                    best.params.d_v > kVolBox - 1e-4;
    return best;
}

ArfimaFigarchFit fit_arfima_figarch(std::span<const double> returns) {
    if (returns.size() < 250) throw DataError("fit_arfima_figarch: need at least 250 observations");
    const auto [lo, hi] = std::minmax_element(returns.begin(), returns.end());
    if (*lo == *hi) throw DataError("fit_arfima_figarch: constant series (zero variance)");
    double mean = 0.0;
    for (double r : returns) mean += r;
    mean /= static_cast<double>(returns.size());
    double variance = 0.0;
    for (double r : returns) variance += (r - mean) * (r - mean);
    variance /= static_cast<double>(returns.size());

    const Stage1Result stage1 = fit_stage1(returns, mean, std::sqrt(variance));
    std::vector<double> eps;
    css_sse(returns, stage1.phi, stage1.theta, stage1.d, stage1.mu, &eps);

    const FigarchFit stage2 = fit_figarch(eps);
    std::vector<double> sigma2;
    figarch_nll(eps, std::log(stage2.params.omega), stage2.params.beta_v, stage2.params.phi_v,
                stage2.params.d_v, &sigma2);

    ArfimaFigarchFit out;
    out.params.phi_m = stage1.phi;
    out.params.theta_m = stage1.theta;
    out.params.d_m = stage1.d;
    out.params.mean_const = stage1.mu;
    out.params.omega = stage2.params.omega;
    out.params.beta_v = stage2.params.beta_v;
    out.params.phi_v = stage2.params.phi_v;
    out.params.d_v = stage2.params.d_v;
    out.boundary = stage1.boundary || stage2.boundary;
    out.stage1_sse = stage1.sse;
    out.stage2_nll = stage2.nll;

    out.std_residuals.resize(eps.size());
    double res_var = 0.0;
    double res_mean = 0.0;
    for (std::size_t t = 0; t < eps.size(); ++t) {
        out.std_residuals[t] = eps[t] / std::sqrt(sigma2[t]);
        res_mean += out.std_residuals[t];
    }
    res_mean /= static_cast<double>(eps.size());
    for (double z : out.std_residuals) res_var += (z - res_mean) * (z - res_mean);
    res_var /= static_cast<double>(eps.size() - 1);
    if (res_var < 0.8 || res_var > 1.2) {
        throw NumericError("fit_arfima_figarch: standardized residual variance " +
                           std::to_string(res_var) + " outside [0.8, 1.2]; best likelihood " +
                           std::to_string(stage2.nll));
    }
    return out;
}

}  // namespace amvp::scenarios
