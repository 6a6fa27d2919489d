#include "nmqj/jumps.hpp"

#include <cmath>
#include <string>

namespace nmqj {

double positive_rate(const MasterEquationModel& model, double t, int k,
                     const StateVector& psi) {
    if (k < 0 || k >= static_cast<int>(model.channels.size())) {
        throw ConfigError("positive_rate: channel index out of range");
    }
    const Channel& ch = model.channels[static_cast<std::size_t>(k)];
    const auto [delta_plus, delta_minus] = rate_split(ch.rate.delta(t));
    const double expect = psi.dot(ch.opdag_op * psi).real();
    if (expect <= kEpsRate) return 0.0;
    return delta_plus * expect;
}

StateVector positive_jump_target(const Operator& C, const StateVector& psi) {
    require_same_dim(C.cols(), psi.size(), "positive_jump_target");
    StateVector phi = C * psi;
    const double norm = phi.norm();
    if (norm <= kEpsRate) {
        throw NumericalError("positive_jump_target: closed channel (||C psi|| = " +
                             std::to_string(norm) + "); such a jump has rate zero");
    }
    return phi / norm;
}

double negative_rate(double delta_minus, std::int64_t n_target, std::int64_t n_source,
                     double expect_target) {
    if (n_source < 1) {
        throw NumericalError("negative_rate: empty source trajectory (breakdown condition)");
    }
    if (delta_minus < 0.0 || n_target < 0 || expect_target < 0.0) {
        throw ConfigError("negative_rate: arguments must be nonnegative");
    }
    return delta_minus * (static_cast<double>(n_target) / static_cast<double>(n_source)) *
           expect_target;
}

bool collinear(const StateVector& a, const StateVector& b, double eps) {
    require_same_dim(a.size(), b.size(), "collinear");
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) {
        throw ConfigError("collinear: zero-norm input");
    }
    return 1.0 - std::abs(a.dot(b)) / (na * nb) <= eps;
}

ReverseResolution resolve_reverse_pairs(const TrajectoryTable& table,
                                        const MasterEquationModel& model, double t) {
    if (table.trajectories.empty()) {
        throw ConfigError("resolve_reverse_pairs: empty trajectory table");
    }
    ReverseResolution out;
    for (int l = 0; l < static_cast<int>(model.channels.size()); ++l) {
        const Channel& ch = model.channels[static_cast<std::size_t>(l)];
        const auto [delta_plus, delta_minus] = rate_split(ch.rate.delta(t));
        if (delta_minus <= 0.0) continue;
        for (const auto& target : table.trajectories) {
            if (target.count < 1) continue;
            const double expect = target.state.dot(ch.opdag_op * target.state).real();
            if (expect <= kEpsRate) continue;
            const StateVector phi = positive_jump_target(ch.op, target.state);

            // Locate the occupied source trajectory holding C|psi_target>.
            // Lineage links are cheap hints; the scan is the ground truth.
            const Trajectory* source = nullptr;
            for (const auto& tr : table.trajectories) {
                if (tr.count < 1 || !tr.parent) continue;
                if (tr.parent->first == target.id && tr.parent->second == l &&
                    collinear(tr.state, phi)) {
                    source = &tr;
                    break;
                }
            }
            if (!source) {
                for (const auto& tr : table.trajectories) {
                    if (tr.count < 1) continue;
                    if (collinear(tr.state, phi)) {
                        source = &tr;
                        break;
                    }
                }
            }
            if (!source) {
                out.breakdowns.push_back({l, target.id, t});
                continue;
            }
            const double rate = negative_rate(delta_minus, target.count, source->count, expect);
            out.pairs.push_back({l, source->id, target.id, rate});
        }
    }
    return out;
}

}  // namespace nmqj
