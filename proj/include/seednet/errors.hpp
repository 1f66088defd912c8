#pragma once

#include <stdexcept>
#include <string>

namespace seednet {

/// Invalid configuration or parameter values. CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input data. CLI exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A requested procedure cannot produce a result on this input
/// (e.g. a degree screen leaves fewer than two candidates). CLI exit code 4.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace seednet
