#pragma once

#include <stdexcept>
#include <string>

namespace vqcnet {

// Error categories aligned with the CLI exit codes:
// ConfigError -> 2, DataError -> 3, NumericError -> 4.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vqcnet
