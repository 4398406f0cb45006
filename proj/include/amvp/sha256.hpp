#pragma once

#include <string>
#include <string_view>

namespace amvp {

/// Hex digest of the SHA-256 hash of `data`. Self-contained implementation;
/// used for the output digests in run manifests.
std::string sha256_hex(std::string_view data);

}  // namespace amvp
