// ensemble.hpp — the stochastic jump process on the trajectory table: per-step
// sampling, density estimation, breakdown detection, and the deterministic
// one-step expectation used to verify the unravelling
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nmqj/jumps.hpp"
#include "nmqj/model.hpp"
#include "nmqj/random.hpp"
#include "nmqj/trajectory.hpp"

namespace nmqj {

struct JumpEvent {
    double time = 0.0;
    bool positive = true;  // false: reverse jump of a negative channel
    int channel = 0;
    int source = 0;          // trajectory id members left
    int target = 0;          // trajectory id members entered
    std::int64_t moved = 0;  // >= 1; draws of zero are not recorded
};

// An open negative channel with an occupied target but no occupied source:
// the process cannot continue past this time.
struct BreakdownEvent {
    double time = 0.0;
    int channel = 0;
    int target = 0;
    std::string message;
};

struct StepResult {
    std::vector<JumpEvent> events;
    std::optional<BreakdownEvent> breakdown;
};

// Single pure initial state: one trajectory holding all n members.
TrajectoryTable init_ensemble(const StateVector& psi0, std::int64_t n, double t0);

// Mixed initial state: one trajectory per component, counts apportioned by
// weight with largest-remainder rounding so they sum to n exactly.
TrajectoryTable init_ensemble(const std::vector<InitialComponent>& components,
                              std::int64_t n, double t0);

// One step of the jump process over [table.time, table.time + dt]:
//   1. evaluate and split all channel rates at the step start;
//   2. resolve reverse pairs; any breakdown candidate halts the step with the
//      table unchanged and a BreakdownEvent;
//   3. cap the per-member jump probability at p_max by recursive halving of
//      the step (at most 20 levels, else NumericalError);
//   4. draw binomial jump counts — trajectories in table order, positive
//      channels in declaration order first, then this trajectory's reverse
//      pairs in resolution order, decrementing the available count so no
//      member jumps twice (this fixed order is the reproducibility contract
//      for the random stream);
//   5. move the drawn counts, creating or merging target trajectories
//      (collinear states merge, keeping the older id; new rows record their
//      (parent, channel) lineage);
//   6. drift-propagate every trajectory, occupied or not;
//   7. advance table.time.
// Jump events carry the time of the (sub)step that sampled them.
StepResult step(TrajectoryTable& table, const MasterEquationModel& model, double dt,
                RandomStream& rng, double p_max = 0.1);

// rho = sum_i (N_i / N) |psi_i><psi_i| — Hermitian and PSD by construction.
DensityMatrix density_estimate(const TrajectoryTable& table);

// Exact expectation of one step (no sampling): enumerates every jump channel
// and reverse pair with the sampler's sequential per-member law, forms
// E[rho(t+dt)], and returns ||E[rho(t+dt)] - (rho + dt L_t rho)||_F. Throws
// NumericalError when a breakdown candidate is present at table.time.
double expected_step_discrepancy(const TrajectoryTable& table,
                                 const MasterEquationModel& model, double dt);

// BreakdownEvent iff some open negative channel has an occupied target and no
// occupied source at time t.
std::optional<BreakdownEvent> detect_breakdown(const TrajectoryTable& table,
                                               const MasterEquationModel& model, double t);

}  // namespace nmqj
