#ifndef PTQHO_ERRORS_HPP
#define PTQHO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ptqho {

// Bad or inconsistent run configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown during a run: invariant breach, NaN field, ... (CLI exit code 3).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Propagator kernel evaluated too close to a focal time, where the
// kernel representation is singular.
struct SingularTimeError : NumericalError {
    explicit SingularTimeError(const std::string& msg) : NumericalError(msg) {}
};

// |A| >= 1: the resonator has no bounded Gaussian mode.
struct UnstableCavityError : NumericalError {
    explicit UnstableCavityError(const std::string& msg) : NumericalError(msg) {}
};

// Iterative eigenpair search exceeded its iteration budget.
struct ConvergenceError : NumericalError {
    explicit ConvergenceError(const std::string& msg) : NumericalError(msg) {}
};

} // namespace ptqho

#endif
