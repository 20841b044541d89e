#ifndef SWAPSTEER_ERRORS_HPP
#define SWAPSTEER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace swapsteer {

/// Malformed configuration input (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A physical assumption of the scheme does not hold for the given input:
/// rank-deficient local states, unmet maximal-violation premise, or an
/// infeasible adversary target (CLI exit code 3).
class AssumptionError : public std::runtime_error {
public:
    explicit AssumptionError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid numerical input or failed numerical check (CLI exit code 4).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace swapsteer

#endif
