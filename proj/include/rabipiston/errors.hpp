#ifndef RABIPISTON_ERRORS_HPP
#define RABIPISTON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rabipiston {

/// Bad input: malformed files, parameter values violating an invariant,
/// queries outside a tabulated range. CLI maps this to exit code 1.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A solver failed: non-convergence, NaN/Inf during evolution, piston
/// leaving the domain. CLI maps this to exit code 2.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem failure. CLI maps this to exit code 3.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rabipiston

#endif
