#include "nmqj/drift.hpp"

#include <string>

namespace nmqj {

StateVector drift_step(const MasterEquationModel& model, double t, double dt,
                       const StateVector& psi) {
    if (!(dt > 0.0)) {
        throw ConfigError("drift_step: dt must be positive");
    }
    const StateVector k1 = drift_generator_apply(model, t, psi);
    const StateVector k2 = drift_generator_apply(model, t + 0.5 * dt, psi + (0.5 * dt) * k1);
    const StateVector k3 = drift_generator_apply(model, t + 0.5 * dt, psi + (0.5 * dt) * k2);
    const StateVector k4 = drift_generator_apply(model, t + dt, psi + dt * k3);
    StateVector out = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double norm = out.norm();
    if (!(norm > 1e-12)) {
        throw NumericalError("drift_step: state norm collapsed at t = " + std::to_string(t));
    }
    return out / norm;
}

}  // namespace nmqj
