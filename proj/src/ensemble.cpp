#include "nmqj/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nmqj/drift.hpp"

namespace nmqj {

namespace {

BreakdownEvent make_breakdown(const BreakdownCandidate& cand) {
    return BreakdownEvent{
        cand.time, cand.channel, cand.target_traj,
        "open negative channel " + std::to_string(cand.channel) + " at t = " +
            std::to_string(cand.time) + ": target trajectory " +
            std::to_string(cand.target_traj) + " is occupied but its source state is empty"};
}

// A pending count move sampled in stage 4, applied in stage 5. Indices are
// into table.trajectories (stable: rows are only ever appended).
struct PendingMove {
    bool positive = true;
    int channel = 0;
    int source_index = 0;
    int target_id = 0;  // reverse moves only
    std::int64_t moved = 0;
};

// One piece of the step procedure over [table.time, table.time + dt]; recurses
// on dt/2 when the per-member jump probability exceeds p_max. Returns false
// when a breakdown halted this piece (the piece leaves the table untouched).
bool step_piece(TrajectoryTable& table, const MasterEquationModel& model, double dt,
                RandomStream& rng, double p_max, int depth, StepResult& result) {
    const double t = table.time;
    const int n_traj = static_cast<int>(table.trajectories.size());
    const int n_chan = static_cast<int>(model.channels.size());

    // stages 1-2: rates and reverse pairs; an unmatched open negative channel
    // halts the process here, before anything moves.
    const ReverseResolution resolution = resolve_reverse_pairs(table, model, t);
    if (!resolution.breakdowns.empty()) {
        result.breakdown = make_breakdown(resolution.breakdowns.front());
        return false;
    }

    std::vector<double> pos_rate(static_cast<std::size_t>(n_traj) * n_chan, 0.0);
    for (int i = 0; i < n_traj; ++i) {
        if (table.trajectories[static_cast<std::size_t>(i)].count < 1) continue;
        for (int k = 0; k < n_chan; ++k) {
            pos_rate[static_cast<std::size_t>(i) * n_chan + k] =
                positive_rate(model, t, k, table.trajectories[static_cast<std::size_t>(i)].state);
        }
    }

    // stage 3: cap the summed per-member probability.
    double max_p = 0.0;
    for (int i = 0; i < n_traj; ++i) {
        const Trajectory& tr = table.trajectories[static_cast<std::size_t>(i)];
        if (tr.count < 1) continue;
        double p = 0.0;
        for (int k = 0; k < n_chan; ++k) {
            p += pos_rate[static_cast<std::size_t>(i) * n_chan + k] * dt;
        }
        for (const ReversePair& pair : resolution.pairs) {
            if (pair.source_traj == tr.id) p += pair.per_member_rate * dt;
        }
        max_p = std::max(max_p, p);
    }
    if (max_p > p_max) {
        if (depth >= 20) {
            throw NumericalError("step: per-member jump probability " + std::to_string(max_p) +
                                 " at t = " + std::to_string(t) +
                                 " still exceeds the cap after 20 step halvings");
        }
        if (!step_piece(table, model, 0.5 * dt, rng, p_max, depth + 1, result)) return false;
        return step_piece(table, model, 0.5 * dt, rng, p_max, depth + 1, result);
    }

    // stage 4: binomial draws against the pre-move counts. Stream consumption
    // order: trajectories in table order; per trajectory, positive channels in
    // declaration order, then this trajectory's reverse pairs in resolution
    // order; the available count drops as draws land, so no member jumps
    // twice. Zero-probability draws consume nothing.
    std::vector<PendingMove> moves;
    for (int i = 0; i < n_traj; ++i) {
        const Trajectory& tr = table.trajectories[static_cast<std::size_t>(i)];
        if (tr.count < 1) continue;
        std::int64_t available = tr.count;
        for (int k = 0; k < n_chan; ++k) {
            const double p = pos_rate[static_cast<std::size_t>(i) * n_chan + k] * dt;
            if (p <= 0.0) continue;
            const auto moved = static_cast<std::int64_t>(
                rng.binomial(static_cast<std::uint64_t>(available), p));
            if (moved > 0) {
                moves.push_back({true, k, i, -1, moved});
                available -= moved;
            }
        }
        for (const ReversePair& pair : resolution.pairs) {
            if (pair.source_traj != tr.id) continue;
            const double p = pair.per_member_rate * dt;
            if (p <= 0.0) continue;
            const auto moved = static_cast<std::int64_t>(
                rng.binomial(static_cast<std::uint64_t>(available), p));
            if (moved > 0) {
                moves.push_back({false, pair.channel, i, pair.target_traj, moved});
                available -= moved;
            }
        }
    }

    // stage 5: move the counts. Positive targets merge into the oldest
    // collinear row or open a new row carrying its lineage.
    for (const PendingMove& m : moves) {
        int target_index = -1;
        if (m.positive) {
            const StateVector phi =
                positive_jump_target(model.channels[static_cast<std::size_t>(m.channel)].op,
                                     table.trajectories[static_cast<std::size_t>(m.source_index)].state);
            const int rows = static_cast<int>(table.trajectories.size());
            for (int j = 0; j < rows; ++j) {
                if (collinear(table.trajectories[static_cast<std::size_t>(j)].state, phi)) {
                    target_index = j;
                    break;
                }
            }
            if (target_index < 0) {
                Trajectory fresh;
                fresh.id = static_cast<int>(table.trajectories.size());
                fresh.state = phi;
                fresh.count = 0;
                fresh.parent = std::pair<int, int>(
                    table.trajectories[static_cast<std::size_t>(m.source_index)].id, m.channel);
                table.trajectories.push_back(std::move(fresh));
                target_index = static_cast<int>(table.trajectories.size()) - 1;
            }
        } else {
            const int rows = static_cast<int>(table.trajectories.size());
            for (int j = 0; j < rows; ++j) {
                if (table.trajectories[static_cast<std::size_t>(j)].id == m.target_id) {
                    target_index = j;
                    break;
                }
            }
        }
        Trajectory& target = table.trajectories[static_cast<std::size_t>(target_index)];
        Trajectory& source = table.trajectories[static_cast<std::size_t>(m.source_index)];
        target.count += m.moved;
        source.count -= m.moved;
        result.events.push_back({t, m.positive, m.channel, source.id, target.id, m.moved});
    }

    // stage 6: drift everyone, occupied or not — an emptied row can be
    // repopulated by a later reverse jump and must keep tracking its state.
    for (Trajectory& tr : table.trajectories) {
        tr.state = drift_step(model, t, dt, tr.state);
    }

    table.time = t + dt;
    return true;
}

}  // namespace

TrajectoryTable init_ensemble(const StateVector& psi0, std::int64_t n, double t0) {
    if (n < 1) {
        throw ConfigError("init_ensemble: ensemble size must be at least 1");
    }
    if (!is_normalized(psi0)) {
        throw ConfigError("init_ensemble: initial state is not normalized");
    }
    TrajectoryTable table;
    table.trajectories.push_back({0, psi0, n, std::nullopt});
    table.total = n;
    table.time = t0;
    return table;
}

TrajectoryTable init_ensemble(const std::vector<InitialComponent>& components,
                              std::int64_t n, double t0) {
    if (n < 1) {
        throw ConfigError("init_ensemble: ensemble size must be at least 1");
    }
    if (components.empty()) {
        throw ConfigError("init_ensemble: initial ensemble must not be empty");
    }
    double weight_sum = 0.0;
    for (const InitialComponent& comp : components) {
        if (!is_normalized(comp.state)) {
            throw ConfigError("init_ensemble: initial state is not normalized");
        }
        if (!(comp.weight > 0.0)) {
            throw ConfigError("init_ensemble: initial weights must be positive");
        }
        weight_sum += comp.weight;
    }

    // Largest-remainder apportionment: counts sum to n exactly.
    const std::size_t m = components.size();
    std::vector<std::int64_t> counts(m, 0);
    std::vector<std::pair<double, std::size_t>> remainders(m);
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double exact = components[i].weight / weight_sum * static_cast<double>(n);
        counts[i] = static_cast<std::int64_t>(std::floor(exact));
        assigned += counts[i];
        remainders[i] = {exact - std::floor(exact), i};
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::int64_t j = 0; j < n - assigned; ++j) {
        counts[remainders[static_cast<std::size_t>(j) % m].second] += 1;
    }

    TrajectoryTable table;
    for (std::size_t i = 0; i < m; ++i) {
        table.trajectories.push_back(
            {static_cast<int>(i), components[i].state, counts[i], std::nullopt});
    }
    table.total = n;
    table.time = t0;
    return table;
}

StepResult step(TrajectoryTable& table, const MasterEquationModel& model, double dt,
                RandomStream& rng, double p_max) {
    if (!(dt > 0.0)) {
        throw ConfigError("step: dt must be positive");
    }
    if (!(p_max > 0.0) || p_max > 0.5) {
        throw ConfigError("step: p_max must lie in (0, 0.5]");
    }
    StepResult result;
    step_piece(table, model, dt, rng, p_max, 0, result);
    return result;
}

DensityMatrix density_estimate(const TrajectoryTable& table) {
    if (table.trajectories.empty()) {
        throw ConfigError("density_estimate: empty trajectory table");
    }
    const std::int64_t n = table.count_sum();
    if (n < 1) {
        throw ConfigError("density_estimate: no occupied trajectories");
    }
    const Eigen::Index dim = table.trajectories.front().state.size();
    DensityMatrix rho = DensityMatrix::Zero(dim, dim);
    for (const Trajectory& tr : table.trajectories) {
        if (tr.count < 1) continue;
        rho += static_cast<double>(tr.count) * (tr.state * tr.state.adjoint());
    }
    return rho / static_cast<double>(n);
}

double expected_step_discrepancy(const TrajectoryTable& table,
                                 const MasterEquationModel& model, double dt) {
    if (!(dt > 0.0)) {
        throw ConfigError("expected_step_discrepancy: dt must be positive");
    }
    const double t = table.time;
    const ReverseResolution resolution = resolve_reverse_pairs(table, model, t);
    if (!resolution.breakdowns.empty()) {
        throw NumericalError("expected_step_discrepancy: breakdown candidate at t = " +
                             std::to_string(t));
    }
    const std::int64_t n_total = table.count_sum();
    if (n_total < 1) {
        throw ConfigError("expected_step_discrepancy: no occupied trajectories");
    }
    const Eigen::Index dim = table.trajectories.front().state.size();

    // Exact expectation of the sampler's sequential per-member law: jump j is
    // taken with probability p_j * prod_{j' before j} (1 - p_j'), in the same
    // order the sampler draws.
    DensityMatrix expected = DensityMatrix::Zero(dim, dim);
    for (const Trajectory& tr : table.trajectories) {
        if (tr.count < 1) continue;
        const double weight = static_cast<double>(tr.count) / static_cast<double>(n_total);
        double survive = 1.0;
        for (int k = 0; k < static_cast<int>(model.channels.size()); ++k) {
            const double p = positive_rate(model, t, k, tr.state) * dt;
            if (p <= 0.0) continue;
            const StateVector after = drift_step(
                model, t, dt,
                positive_jump_target(model.channels[static_cast<std::size_t>(k)].op, tr.state));
            expected += (weight * survive * p) * (after * after.adjoint());
            survive *= 1.0 - p;
        }
        for (const ReversePair& pair : resolution.pairs) {
            if (pair.source_traj != tr.id) continue;
            const double p = pair.per_member_rate * dt;
            if (p <= 0.0) continue;
            const Trajectory* target = table.find(pair.target_traj);
            const StateVector after = drift_step(model, t, dt, target->state);
            expected += (weight * survive * p) * (after * after.adjoint());
            survive *= 1.0 - p;
        }
        const StateVector stay = drift_step(model, t, dt, tr.state);
        expected += (weight * survive) * (stay * stay.adjoint());
    }

    const DensityMatrix rho = density_estimate(table);
    const DensityMatrix first_order = rho + dt * generator_apply(model, t, rho);
    return (expected - first_order).norm();
}

std::optional<BreakdownEvent> detect_breakdown(const TrajectoryTable& table,
                                               const MasterEquationModel& model, double t) {
    const ReverseResolution resolution = resolve_reverse_pairs(table, model, t);
    if (resolution.breakdowns.empty()) return std::nullopt;
    return make_breakdown(resolution.breakdowns.front());
}

}  // namespace nmqj
