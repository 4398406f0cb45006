#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "amvp/nig.hpp"
#include "amvp/rng.hpp"

namespace amvp::scenarios {

/// Joint mean/volatility model: ARFIMA(1, d_m, 1) for returns with FIGARCH
/// (1, d_v, 1) conditional variance. phi(L) = 1 - phi L, theta(L) = 1 + theta L.
struct ArfimaFigarchParams {
    double phi_m = 0.0;
    double theta_m = 0.0;
    double d_m = 0.0;
    double mean_const = 0.0;
    double omega = 1e-4;
    double beta_v = 0.0;
    double phi_v = 0.0;
    double d_v = 0.0;
};

/// Lag cut-off shared by the fractional filters and the ARCH(inf) expansion.
inline constexpr std::size_t kTruncationLags = 1000;

/// Pre-sample periods discarded from every simulated path so the long-memory
/// recursions forget their initialization.
inline constexpr std::size_t kBurnIn = 2000;

/// ARCH(inf) weights psi_1..psi_n of the FIGARCH recursion
///   sigma_t^2 = omega / (1 - beta) + sum_j psi_j eps_{t-j}^2,
/// where psi(L) = 1 - (1 - beta L)^{-1} (1 - phi L)(1 - L)^d.
std::vector<double> figarch_arch_weights(double phi_v, double d_v, double beta_v, std::size_t n);

/// Checks the parameter boxes plus the numerical non-negativity of the first
/// kTruncationLags ARCH weights. Throws NumericError on violation.
void validate_arfima_figarch(const ArfimaFigarchParams& params);

/// One simulated return path of length t_len (after discarding kBurnIn
/// periods). Innovations are NIG draws standardized to zero mean and unit
/// variance before entering the variance recursion. Throws NumericError if
/// the recursion produces a non-positive conditional variance.
std::vector<double> simulate_arfima_figarch_path(const ArfimaFigarchParams& params,
                                                 const NigParams& innovations, std::size_t t_len,
                                                 Rng& rng);

struct FigarchParams {
    double omega = 1e-4;
    double beta_v = 0.0;
    double phi_v = 0.0;
    double d_v = 0.0;
};

struct FigarchFit {
    FigarchParams params;
    double nll = 0.0;  // Gaussian quasi-likelihood, up to constants
    bool boundary = false;
};

/// Stage-2 estimator: FIGARCH(1, d_v, 1) by Gaussian QML on a demeaned series,
/// multi-start Nelder-Mead over (log omega, beta, phi, d_v).
FigarchFit fit_figarch(std::span<const double> demeaned);

struct ArfimaFigarchFit {
    ArfimaFigarchParams params;
    std::vector<double> std_residuals;  // innovations / fitted conditional sd
    bool boundary = false;
    double stage1_sse = 0.0;
    double stage2_nll = 0.0;
};

/// Two-stage quasi-maximum-likelihood fit. Stage 1 fits the ARFIMA mean
/// equation by conditional sum of squares over (phi, theta, d_m, mean);
/// stage 2 fits FIGARCH to the stage-1 residuals. Requires length >= 250 and
/// a non-constant series; throws NumericError when the standardized residual
/// variance falls outside [0.8, 1.2].
ArfimaFigarchFit fit_arfima_figarch(std::span<const double> returns);

}  // namespace amvp::scenarios
