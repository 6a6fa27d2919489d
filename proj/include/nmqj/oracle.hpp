// oracle.hpp — direct density-matrix integration of the master equation and the
// lowest-eigenvalue positivity monitor, used as ground truth for the jump process
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nmqj/model.hpp"

namespace nmqj {

struct DensityTrajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::string label;
    double dt = 0.0;  // integration step used to produce the samples
};

struct PositivityReport {
    bool violated = false;
    std::optional<double> t0;           // first zero crossing of the lowest eigenvalue
    std::optional<StateVector> phi0;    // eigenvector at the crossing
    std::optional<double> slope_check;  // <phi0| L_{t0} rho(t0) |phi0>, negative at a crossing
};

// Classical RK4 on d(rho)/dt = L_t rho from rho0 at model.t_start, Hermiticity
// restored by symmetrization after every step. Samples are stored at t_start,
// every output_stride-th step, and t_end. Throws NumericalError when the trace
// drifts by more than 1e-8 or the state stops being finite; rate poles
// propagate as RatePoleError. The oracle never projects back onto the
// positive cone — it integrates straight through a positivity violation, which
// is exactly what makes it useful as a contrast to the halting jump process.
DensityTrajectory integrate_master(const MasterEquationModel& model, const DensityMatrix& rho0,
                                   double dt, int output_stride);

// Scans the lowest eigenvalue of the stored samples; on the first crossing
// below -1e-12 the crossing time t0 is located by bisection (re-integrating
// the bracketing segment) to within dt, and the report carries the boundary
// eigenvector phi0 and the slope <phi0|L_{t0} rho(t0)|phi0>.
PositivityReport positivity_monitor(const DensityTrajectory& traj,
                                    const MasterEquationModel& model);

// CSV export: header then one row per sample — t, row-major re/im pairs of
// rho, lambda_min.
std::string density_trajectory_csv(const DensityTrajectory& traj);

}  // namespace nmqj
