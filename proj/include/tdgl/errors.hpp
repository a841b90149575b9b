#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tdgl {

// Raised when an iterative solver fails to reach its tolerance.
class SolverError : public std::runtime_error {
public:
    SolverError(std::string what, double residual, int iterations)
        : std::runtime_error(std::move(what)), residual(residual), iterations(iterations) {}
    double residual;
    int iterations;
};

// Raised by config parsing/validation; carries every violation found.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations(std::move(violations)) {}
    std::vector<std::string> violations;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "config validation failed:";
        for (const auto& x : v) {
            s += "\n  - ";
            s += x;
        }
        return s;
    }
};

// Raised on malformed or incomplete run-record directories.
class RecordError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tdgl
