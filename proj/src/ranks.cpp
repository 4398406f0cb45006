#include "amvp/ranks.hpp"

#include <algorithm>
#include <numeric>

namespace amvp {

std::vector<std::size_t> sort_permutation(std::span<const double> values) {
    std::vector<std::size_t> perm(values.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    return perm;
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::vector<std::size_t> perm = sort_permutation(values);
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < perm.size()) {
        std::size_t j = i;
        while (j + 1 < perm.size() && values[perm[j + 1]] == values[perm[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[perm[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace amvp
