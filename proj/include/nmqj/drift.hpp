// drift.hpp — deterministic propagation of a trajectory state between jumps
#pragma once

#include "nmqj/model.hpp"

namespace nmqj {

// One classical RK4 step of d|psi>/dt = -i G(t)|psi> on the normalized
// nonlinear drift field, followed by explicit renormalization. Throws
// NumericalError on norm collapse (pre-renormalization norm < 1e-12).
StateVector drift_step(const MasterEquationModel& model, double t, double dt,
                       const StateVector& psi);

}  // namespace nmqj
