#ifndef JUMPDYN_ERRORS_HPP
#define JUMPDYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jumpdyn {

// Bad user input: malformed config file, schema violation, invalid parameter
// combination.  The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Grid too coarse for the requested kernels (mass identities violated beyond
// tolerance).  Also mapped to exit code 1 (fix the config).
class ResolutionError : public std::runtime_error {
public:
    explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure at run time: blow-up of the integrated hierarchy,
// diverging Picard iteration, pathological rejection sampling.  The CLI maps
// this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace jumpdyn

#endif
