// jumps.hpp — jump rates, targets, and reverse-pair resolution for negative channels
#pragma once

#include <vector>

#include "nmqj/model.hpp"
#include "nmqj/trajectory.hpp"

namespace nmqj {

inline constexpr double kEpsCollinear = 1e-9;  // state-matching tolerance
inline constexpr double kEpsRate = 1e-12;      // channel-open threshold

// A resolved reverse jump for negative channel `channel`: members sitting in
// `source_traj` (state C|psi'>/||.||) move back to `target_traj` (state
// |psi'>) at `per_member_rate` = Delta_minus * (N_target / N_source) * <psi'|C†C|psi'>.
struct ReversePair {
    int channel = 0;
    int source_traj = 0;
    int target_traj = 0;
    double per_member_rate = 0.0;
};

// An open negative channel whose required source trajectory is unoccupied:
// the process cannot realize the reverse jump and must halt.
struct BreakdownCandidate {
    int channel = 0;
    int target_traj = 0;
    double time = 0.0;
};

struct ReverseResolution {
    std::vector<ReversePair> pairs;
    std::vector<BreakdownCandidate> breakdowns;
};

// Gamma_plus = Delta_plus(t) * <psi|C†C|psi> for channel k. Returns exactly 0
// when the expectation falls below kEpsRate.
double positive_rate(const MasterEquationModel& model, double t, int k,
                     const StateVector& psi);

// C|psi>/||C|psi>||. Throws NumericalError when ||C psi|| <= kEpsRate (closed
// channel; such a jump has rate zero and must never be sampled).
StateVector positive_jump_target(const Operator& C, const StateVector& psi);

// Gamma_minus = delta_minus * (n_target / n_source) * expect_target. Throws
// NumericalError when n_source = 0 (the caller must treat the empty source as
// a breakdown, never clamp).
double negative_rate(double delta_minus, std::int64_t n_target, std::int64_t n_source,
                     double expect_target);

// Phase-insensitive ray equality: 1 - |<a/||a||, b/||b||>| <= eps.
bool collinear(const StateVector& a, const StateVector& b, double eps = kEpsCollinear);

// For every negative channel open at t and every occupied trajectory j with
// <psi_j|C†C|psi_j> > kEpsRate, locate the occupied source trajectory whose
// state is collinear with C psi_j (lineage links are tried first, then a full
// scan) and emit a ReversePair; when no occupied source exists, emit a
// BreakdownCandidate instead. Breakdown is data here, not an exception.
ReverseResolution resolve_reverse_pairs(const TrajectoryTable& table,
                                        const MasterEquationModel& model, double t);

}  // namespace nmqj
