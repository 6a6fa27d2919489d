#include "nmqj/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "nmqj/format.hpp"
#include "nmqj/model_json.hpp"
#include "nmqj/registry.hpp"

namespace nmqj {

namespace {

using nlohmann::json;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write '" + path + "'");
    }
    out << content;
    if (!out) {
        throw ConfigError("write to '" + path + "' failed");
    }
}

std::string out_path(const RunConfig& config, const char* name) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory '" + config.out_dir + "'");
    }
    return (std::filesystem::path(config.out_dir) / name).string();
}

int occupied_rows(const TrajectoryTable& table) {
    int n = 0;
    for (const auto& tr : table.trajectories) {
        if (tr.count > 0) ++n;
    }
    return n;
}

json event_json(const JumpEvent& ev) {
    json j;
    j["t"] = ev.time;
    j["kind"] = ev.positive ? "positive" : "negative";
    j["channel"] = ev.channel;
    j["source"] = ev.source;
    j["target"] = ev.target;
    j["moved"] = ev.moved;
    return j;
}

json breakdown_json(const BreakdownEvent& ev) {
    json j;
    j["t"] = ev.time;
    j["kind"] = "breakdown";
    j["channel"] = ev.channel;
    j["target"] = ev.target;
    j["message"] = ev.message;
    return j;
}

json config_json(const RunConfig& config) {
    json j;
    j["label"] = config.model.label;
    j["n"] = config.ensemble_size;
    j["dt"] = config.dt;
    j["stride"] = config.output_stride;
    j["seed"] = config.seed;
    j["p_max"] = config.p_max;
    j["lamb_shift"] = config.model.lamb_shift && config.model.lamb_shift->enabled;
    return j;
}

std::string timeseries_csv(const RunConfig& config, const EnsembleRun& run) {
    const int dim = config.model.dim;
    std::string out = "t";
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            const std::string rc = std::to_string(r) + "_" + std::to_string(c);
            out += ",re_" + rc + ",im_" + rc;
        }
    }
    for (const auto& [name, op] : config.model.observables) {
        out += "," + name;
    }
    out += ",n_distinct\n";
    for (std::size_t i = 0; i < run.times.size(); ++i) {
        out += format_double(run.times[i]);
        const DensityMatrix& rho = run.densities[i];
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                out += "," + format_double(rho(r, c).real());
                out += "," + format_double(rho(r, c).imag());
            }
        }
        for (const auto& [name, op] : config.model.observables) {
            out += "," + format_double((op * rho).trace().real());
        }
        out += "," + std::to_string(run.n_distinct[i]) + "\n";
    }
    return out;
}

double max_trace_distance(const std::vector<DensityMatrix>& a,
                          const std::vector<DensityMatrix>& b, std::size_t count) {
    double max_td = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        max_td = std::max(max_td, trace_distance(a[i], b[i]));
    }
    return max_td;
}

}  // namespace

void RunConfig::validate() const {
    if (ensemble_size < 1) {
        throw ConfigError("config: ensemble size must be at least 1");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("config: dt must be a positive number");
    }
    if (output_stride < 1) {
        throw ConfigError("config: output stride must be at least 1");
    }
    if (!(p_max > 0.0) || p_max > 0.5) {
        throw ConfigError("config: p_max must lie in (0, 0.5]");
    }
    model.validate();
}

EnsembleRun run_ensemble(const RunConfig& config, RandomStream& rng) {
    config.validate();
    const MasterEquationModel& model = config.model;

    const long long n_steps =
        std::max(1LL, std::llround((model.t_end - model.t_start) / config.dt));
    const double h = (model.t_end - model.t_start) / static_cast<double>(n_steps);

    TrajectoryTable table = init_ensemble(model.initial, config.ensemble_size, model.t_start);
    EnsembleRun run;
    const auto record = [&]() {
        run.times.push_back(table.time);
        run.densities.push_back(density_estimate(table));
        run.n_distinct.push_back(occupied_rows(table));
    };
    record();
    for (long long i = 0; i < n_steps; ++i) {
        table.time = model.t_start + static_cast<double>(i) * h;
        StepResult result = step(table, model, h, rng, config.p_max);
        run.events.insert(run.events.end(), result.events.begin(), result.events.end());
        if (result.breakdown) {
            run.breakdown = result.breakdown;
            break;
        }
        if (table.count_sum() != table.total) {
            throw NumericalError("run: member count no longer matches the ensemble size");
        }
        table.time = model.t_start + static_cast<double>(i + 1) * h;
        if ((i + 1) % config.output_stride == 0 || i + 1 == n_steps) record();
    }
    run.final_table = std::move(table);
    return run;
}

int cmd_simulate(const RunConfig& config) {
    RandomStream rng(config.seed);
    const EnsembleRun run = run_ensemble(config, rng);

    write_file(out_path(config, "model.canonical.json"), canonical_model_json(config.model));
    write_file(out_path(config, "timeseries.csv"), timeseries_csv(config, run));

    std::string events_text;
    for (const JumpEvent& ev : run.events) {
        events_text += event_json(ev).dump() + "\n";
    }
    if (run.breakdown) {
        events_text += breakdown_json(*run.breakdown).dump() + "\n";
    }
    write_file(out_path(config, "events.jsonl"), events_text);

    std::int64_t n_positive = 0;
    std::int64_t n_negative = 0;
    for (const JumpEvent& ev : run.events) {
        (ev.positive ? n_positive : n_negative) += 1;
    }
    json summary;
    summary["rng"] = RandomStream::algorithm();
    summary["config"] = config_json(config);
    summary["status"] = run.breakdown ? "breakdown" : "completed";
    summary["breakdown"] = run.breakdown ? breakdown_json(*run.breakdown) : json(nullptr);
    summary["events"] = {{"positive", n_positive}, {"negative", n_negative}};
    summary["final"] = {{"t", run.final_table.time},
                        {"total", run.final_table.count_sum()},
                        {"n_distinct", occupied_rows(run.final_table)},
                        {"samples", run.times.size()}};
    write_file(out_path(config, "summary.json"), summary.dump(2) + "\n");

    if (run.breakdown) {
        std::cout << "breakdown: " << run.breakdown->message << "\n";
        return 3;
    }
    std::cout << "completed: " << run.times.size() << " samples, " << run.events.size()
              << " jump events -> " << config.out_dir << "\n";
    return 0;
}

int cmd_integrate(const RunConfig& config) {
    config.validate();
    const DensityTrajectory traj = integrate_master(config.model, config.model.initial_density(),
                                                    config.dt, config.output_stride);
    const PositivityReport report = positivity_monitor(traj, config.model);

    write_file(out_path(config, "oracle.csv"), density_trajectory_csv(traj));

    json j;
    j["label"] = config.model.label;
    j["violated"] = report.violated;
    j["t0"] = report.t0 ? json(*report.t0) : json(nullptr);
    j["slope_check"] = report.slope_check ? json(*report.slope_check) : json(nullptr);
    if (report.phi0) {
        json phi = json::array();
        for (Eigen::Index i = 0; i < report.phi0->size(); ++i) {
            phi.push_back({(*report.phi0)(i).real(), (*report.phi0)(i).imag()});
        }
        j["phi0"] = std::move(phi);
    } else {
        j["phi0"] = json(nullptr);
    }
    write_file(out_path(config, "positivity.json"), j.dump(2) + "\n");

    std::cout << (report.violated
                      ? "positivity violated at t0 = " + format_double(*report.t0)
                      : std::string("no positivity violation on the span"))
              << "\n";
    return 0;
}

int cmd_compare(const RunConfig& config, bool self_mode) {
    config.validate();
    const DensityTrajectory oracle = integrate_master(
        config.model, config.model.initial_density(), config.dt, config.output_stride);

    json report;
    report["label"] = config.model.label;
    report["mode"] = self_mode ? "oracle_vs_oracle" : "ensemble_vs_oracle";
    report["config"] = config_json(config);

    double max_td = 0.0;
    json obs_dev = json::object();
    std::optional<BreakdownEvent> breakdown;

    if (self_mode) {
        const DensityTrajectory again = integrate_master(
            config.model, config.model.initial_density(), config.dt, config.output_stride);
        max_td = max_trace_distance(oracle.states, again.states, oracle.states.size());
        for (const auto& [name, op] : config.model.observables) {
            double dev = 0.0;
            for (std::size_t i = 0; i < oracle.states.size(); ++i) {
                dev = std::max(dev, std::abs((op * (oracle.states[i] - again.states[i]))
                                                 .trace()
                                                 .real()));
            }
            obs_dev[name] = dev;
        }
        report["grid_points"] = oracle.states.size();
    } else {
        RandomStream rng(config.seed);
        const EnsembleRun run = run_ensemble(config, rng);
        breakdown = run.breakdown;
        // On breakdown the ensemble grid is a prefix of the oracle's.
        const std::size_t shared = std::min(run.densities.size(), oracle.states.size());
        max_td = max_trace_distance(run.densities, oracle.states, shared);
        for (const auto& [name, op] : config.model.observables) {
            double dev = 0.0;
            for (std::size_t i = 0; i < shared; ++i) {
                dev = std::max(dev, std::abs((op * (run.densities[i] - oracle.states[i]))
                                                 .trace()
                                                 .real()));
            }
            obs_dev[name] = dev;
        }
        report["grid_points"] = shared;
    }

    report["max_trace_distance"] = max_td;
    report["observable_max_deviation"] = obs_dev;
    report["breakdown"] = breakdown ? breakdown_json(*breakdown) : json(nullptr);
    write_file(out_path(config, "compare.json"), report.dump(2) + "\n");

    std::cout << "max trace distance = " << format_double(max_td) << " over "
              << report["grid_points"].get<std::size_t>() << " grid points\n";
    if (breakdown) {
        std::cout << "breakdown: " << breakdown->message << "\n";
        return 3;
    }
    return 0;
}

int cmd_models(const std::string& dump_name) {
    if (dump_name.empty()) {
        for (const BuiltinInfo& info : builtin_models()) {
            std::cout << info.name << "\n    " << info.summary << "\n";
        }
        return 0;
    }
    std::cout << canonical_model_json(builtin_model(dump_name, false));
    return 0;
}

}  // namespace nmqj
