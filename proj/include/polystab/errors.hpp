#ifndef POLYSTAB_ERRORS_HPP
#define POLYSTAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace polystab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A dimension constraint was violated (typically N <= 2m where N > 2m is required).
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// An operation was called with the wrong parity of m.
class ParityError : public Error {
public:
    explicit ParityError(const std::string& msg) : Error(msg) {}
};

/// Invalid configuration or argument values.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Evaluation outside the stored domain of a profile or grid.
class RangeError : public Error {
public:
    explicit RangeError(const std::string& msg) : Error(msg) {}
};

/// A numerical procedure failed (non-convergence, admissibility, hard residual checks).
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& msg) : Error(msg) {}
};

/// The global/blow-up classification machinery could not reach a verdict.
class ClassificationError : public Error {
public:
    explicit ClassificationError(const std::string& msg) : Error(msg) {}
};

} // namespace polystab

#endif
