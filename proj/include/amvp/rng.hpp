#pragma once

#include <cstdint>
#include <random>

namespace amvp {

/// Derives an independent substream seed from a master seed and up to two
/// tags (asset index, path index, ...). splitmix64 over the concatenation, so
/// results do not depend on which thread runs which unit.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b = 0);

/// Deterministic scalar sampler. The engine is mt19937_64 (bit-exact by the
/// standard); all variate transforms are implemented here rather than with
/// std:: distributions, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1]; never returns 0, so log(u) is safe.
    double uniform01();

    /// Standard normal via Box-Muller. Consumes exactly two uniforms per pair.
    double normal();

    /// Inverse-Gaussian(mean, shape) via the Michael-Schucany-Haas transform.
    double inverse_gaussian(double mean, double shape);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace amvp
