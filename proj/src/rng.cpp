#include "amvp/rng.hpp"

#include <cmath>
#include <numbers>

namespace amvp {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b) {
    std::uint64_t state = seed;
    std::uint64_t out = splitmix64(state);
    state ^= tag_a + 0x165667b19e3779f9ULL;
    out ^= splitmix64(state);
    state ^= tag_b + 0x27d4eb2f165667c5ULL;
    out ^= splitmix64(state);
    return out;
}

double Rng::uniform01() {
    // 53-bit mantissa, shifted into (0, 1].
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_normal_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double Rng::inverse_gaussian(double mean, double shape) {
    const double nu = normal();
    const double y = nu * nu;
    const double x = mean + mean * mean * y / (2.0 * shape) -
                     mean / (2.0 * shape) * std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
    const double u = uniform01();
    if (u <= mean / (mean + x)) return x;
    return mean * mean / x;
}

}  // namespace amvp
