#include "amvp/nig.hpp"

#include <cmath>

#include "amvp/errors.hpp"
#include "amvp/rng.hpp"

namespace amvp::scenarios {

namespace {

double gamma_of(const NigParams& p) {
    return std::sqrt(p.alpha_tail * p.alpha_tail - p.beta_skew * p.beta_skew);
}

constexpr std::uint64_t kNigStreamTag = 0x4e494753414d50ULL;

}  // namespace

void NigParams::validate() const {
    if (!(alpha_tail > 0.0)) throw NumericError("NIG: alpha must be positive");
    if (!(std::fabs(beta_skew) < alpha_tail)) throw NumericError("NIG: |beta| must be < alpha");
    if (!(delta_scale > 0.0)) throw NumericError("NIG: delta must be positive");
}

double nig_mean(const NigParams& p) { return p.mu_loc + p.delta_scale * p.beta_skew / gamma_of(p); }

double nig_variance(const NigParams& p) {
    const double g = gamma_of(p);
    return p.delta_scale * p.alpha_tail * p.alpha_tail / (g * g * g);
}

double nig_skewness(const NigParams& p) {
    const double g = gamma_of(p);
    return 3.0 * p.beta_skew / (p.alpha_tail * std::sqrt(p.delta_scale * g));
}

double nig_excess_kurtosis(const NigParams& p) {
    const double g = gamma_of(p);
    const double ratio = p.beta_skew / p.alpha_tail;
    return 3.0 * (1.0 + 4.0 * ratio * ratio) / (p.delta_scale * g);
}

NigParams near_gaussian_nig(double mean, double variance) {
    // Excess kurtosis 0.1 and no skew: close enough to Gaussian for limit
    // checks while keeping the NIG parameterization valid.
    const double zeta = 3.0 / 0.1;
    NigParams p;
    p.beta_skew = 0.0;
    p.alpha_tail = std::sqrt(zeta / variance);
    p.delta_scale = std::sqrt(zeta * variance);
    p.mu_loc = mean;
    return p;
}

NigFit fit_nig(std::span<const double> sample) {
    const auto n = sample.size();
    if (n < 100) throw DataError("fit_nig: need at least 100 observations");
    double mean = 0.0;
    for (double x : sample) mean += x;
    mean /= static_cast<double>(n);
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double x : sample) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    if (!(m2 > 0.0)) throw DataError("fit_nig: sample has zero variance");

    const double sd = std::sqrt(m2);
    double skew = m3 / (sd * sd * sd);
    const double excess_kurtosis = m4 / (m2 * m2) - 3.0;
    if (std::fabs(skew) < 1e-10) skew = 0.0;  // symmetric samples map to beta = 0

    NigFit out;
    const double feasibility_bound = (5.0 / 3.0) * skew * skew;
    if (excess_kurtosis <= feasibility_bound || excess_kurtosis <= 1e-8) {
        out.params = near_gaussian_nig(mean, m2);
        out.moment_fallback = true;
        return out;
    }

    // Invert the moment equations: with r = beta/alpha and zeta = delta*gamma,
    //   skew^2 / kurtosis = 9 r^2 / (3 + 12 r^2),  kurtosis = 3 (1 + 4 r^2) / zeta.
    const double b = skew * skew / excess_kurtosis;
    const double r2 = b / (3.0 - 4.0 * b);
    const double r = std::copysign(std::sqrt(r2), skew);
    const double zeta = 3.0 * (1.0 + 4.0 * r2) / excess_kurtosis;
    NigParams p;
    p.alpha_tail = std::sqrt(zeta / m2) / (1.0 - r2);
    p.beta_skew = r * p.alpha_tail;
    p.delta_scale = std::sqrt(zeta * m2 * (1.0 - r2));
    p.mu_loc = mean - p.delta_scale * r / std::sqrt(1.0 - r2);
    p.validate();
    out.params = p;
    return out;
}

std::vector<double> nig_sample(const NigParams& p, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("nig_sample: n must be >= 1");
    p.validate();
    const double g = gamma_of(p);
    const double ig_mean = p.delta_scale / g;
    const double ig_shape = p.delta_scale * p.delta_scale;
    Rng rng(mix_seed(seed, kNigStreamTag));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = rng.inverse_gaussian(ig_mean, ig_shape);
        out[i] = p.mu_loc + p.beta_skew * z + std::sqrt(z) * rng.normal();
    }
    return out;
}

}  // namespace amvp::scenarios
