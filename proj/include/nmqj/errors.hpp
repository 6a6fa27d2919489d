// errors.hpp — error taxonomy shared across the simulator
#pragma once

#include <stdexcept>
#include <string>

namespace nmqj {

// Invalid model files, run configuration, malformed inputs. CLI exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failures during a run (rate poles, norm collapse, trace drift,
// unreachable step-size cap). CLI exit code 4.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rate evaluation hit a genuine singularity of the generator.
struct RatePoleError : NumericalError {
    double t;
    explicit RatePoleError(double t_)
        : NumericalError("rate function has a pole at t = " + std::to_string(t_)), t(t_) {}
};

}  // namespace nmqj
