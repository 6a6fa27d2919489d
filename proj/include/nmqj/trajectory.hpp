// trajectory.hpp — the trajectory table: distinct pure states with integer occupation counts
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nmqj/hilbert.hpp"

namespace nmqj {

// One distinct ensemble state |psi_i> with its occupation count N_i. The
// lineage link records the positive jump (parent trajectory, channel) that
// created this trajectory; it is consulted first when matching reverse jumps.
struct Trajectory {
    int id = 0;
    StateVector state;
    std::int64_t count = 0;
    std::optional<std::pair<int, int>> parent;  // (trajectory id, channel index)
};

// Discrete ensemble density: the set of trajectories with total member count
// N = sum N_i. N is conserved over a whole run — jumps move counts between
// rows, never create or destroy members. Rows emptied by jumps are retained
// (and kept drifting) since reverse jumps can repopulate them.
struct TrajectoryTable {
    std::vector<Trajectory> trajectories;
    std::int64_t total = 0;
    double time = 0.0;

    std::int64_t count_sum() const {
        std::int64_t s = 0;
        for (const auto& tr : trajectories) s += tr.count;
        return s;
    }

    const Trajectory* find(int id) const {
        for (const auto& tr : trajectories) {
            if (tr.id == id) return &tr;
        }
        return nullptr;
    }

    Trajectory* find(int id) {
        for (auto& tr : trajectories) {
            if (tr.id == id) return &tr;
        }
        return nullptr;
    }
};

}  // namespace nmqj
