#pragma once

#include <stdexcept>
#include <string>

namespace srvreg {

// Error taxonomy mirrors the CLI exit codes: input data (2), numeric (3), config (4).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace srvreg
