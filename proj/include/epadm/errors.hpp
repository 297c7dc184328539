#pragma once

#include <stdexcept>
#include <string>

namespace epadm {

// Configuration / input errors (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Runtime invariant violations: superluminal momentum, failed recovery,
// non-positive-definite metric, rejected step (CLI exit code 3).
class InvariantError : public std::runtime_error {
public:
    explicit InvariantError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace epadm
