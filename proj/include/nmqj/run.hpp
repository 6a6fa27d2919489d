// run.hpp — run configuration, in-memory runs, and the file-writing commands
// behind the CLI
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nmqj/ensemble.hpp"
#include "nmqj/model.hpp"
#include "nmqj/oracle.hpp"

namespace nmqj {

struct RunConfig {
    MasterEquationModel model;
    std::int64_t ensemble_size = 10000;
    double dt = 1e-3;
    int output_stride = 10;
    std::uint64_t seed = 1;
    double p_max = 0.1;
    std::string out_dir = ".";

    void validate() const;  // ConfigError on out-of-range numbers
};

// Jump-process run with samples on the output grid (t_start, every
// output_stride-th step, t_end — the same grid integrate_master uses, so the
// two are directly comparable). Stops early on breakdown.
struct EnsembleRun {
    std::vector<double> times;
    std::vector<DensityMatrix> densities;
    std::vector<int> n_distinct;  // occupied trajectories per sample
    std::vector<JumpEvent> events;
    std::optional<BreakdownEvent> breakdown;
    TrajectoryTable final_table;
};

EnsembleRun run_ensemble(const RunConfig& config, RandomStream& rng);

// Commands return the process exit code: 0 done, 3 breakdown. Config problems
// throw ConfigError (exit 2), numerical failures NumericalError (exit 4).
int cmd_simulate(const RunConfig& config);
int cmd_integrate(const RunConfig& config);
int cmd_compare(const RunConfig& config, bool self_mode);
int cmd_models(const std::string& dump_name);  // empty name lists the registry

}  // namespace nmqj
