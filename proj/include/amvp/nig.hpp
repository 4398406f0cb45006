#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace amvp::scenarios {

/// Normal-inverse-Gaussian parameters; requires |beta_skew| < alpha_tail and
/// delta_scale > 0.
struct NigParams {
    double alpha_tail = 1.0;
    double beta_skew = 0.0;
    double mu_loc = 0.0;
    double delta_scale = 1.0;

    void validate() const;
};

double nig_mean(const NigParams& p);
double nig_variance(const NigParams& p);
double nig_skewness(const NigParams& p);
double nig_excess_kurtosis(const NigParams& p);

struct NigFit {
    NigParams params;
    bool moment_fallback = false;  // sample moments outside the NIG-feasible region
};

/// Method-of-moments fit matching mean, variance, skewness and excess
/// kurtosis. When the sample excess kurtosis does not exceed the feasibility
/// bound (5/3) * skewness^2 the fit falls back to a near-Gaussian
/// parameterization that still matches mean and variance, and flags it.
NigFit fit_nig(std::span<const double> sample);

/// n independent draws via the mixture representation: z ~ IG(delta/gamma,
/// delta^2), then x = mu + beta z + sqrt(z) * N(0,1). Deterministic under seed.
std::vector<double> nig_sample(const NigParams& p, std::size_t n, std::uint64_t seed);

/// Mild-kurtosis symmetric NIG with the given mean and variance; used as the
/// Gaussian-limit innovation model.
NigParams near_gaussian_nig(double mean, double variance);

}  // namespace amvp::scenarios
