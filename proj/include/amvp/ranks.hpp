#pragma once

#include <span>
#include <vector>

namespace amvp {

/// 1-based ranks with ties assigned the average rank of the tied block.
std::vector<double> average_ranks(std::span<const double> values);

/// Permutation that sorts `values` ascending, ties broken by index (stable).
std::vector<std::size_t> sort_permutation(std::span<const double> values);

}  // namespace amvp
