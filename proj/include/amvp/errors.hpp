#pragma once

#include <stdexcept>
#include <string>

namespace amvp {

/// Invalid configuration: bad flags, out-of-range parameters, unknown keys.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent input data (CSV parse failures, invariant violations).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: singular systems, non-convergence, invalid model parameters.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace amvp
