// main.cpp — command-line front end: simulate | integrate | compare | models
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nmqj/model_json.hpp"
#include "nmqj/registry.hpp"
#include "nmqj/run.hpp"

namespace {

struct Options {
    std::string model_path;
    std::string builtin;
    std::int64_t n = 10000;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    std::string out = ".";
    int stride = 10;
    double p_max = 0.1;
    bool lamb_shift = false;
    bool self_compare = false;
    std::string dump_name;
};

void add_model_options(CLI::App* cmd, Options& opt) {
    auto* model = cmd->add_option("--model", opt.model_path, "Model JSON file");
    auto* builtin = cmd->add_option("--builtin", opt.builtin, "Builtin model name");
    model->excludes(builtin);
    builtin->excludes(model);
    cmd->add_flag("--lamb-shift", opt.lamb_shift,
                  "Enable the model's Lamb-shift Hamiltonian term (accepts =true/=false)");
}

void add_run_options(CLI::App* cmd, Options& opt, bool with_ensemble) {
    if (with_ensemble) {
        cmd->add_option("--n", opt.n, "Ensemble size")->capture_default_str();
        cmd->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
        cmd->add_option("--p-max", opt.p_max, "Per-member jump probability cap per step")
            ->capture_default_str();
    }
    cmd->add_option("--dt", opt.dt, "Integration step")->capture_default_str();
    cmd->add_option("--stride", opt.stride, "Output every stride-th step")
        ->capture_default_str();
    cmd->add_option("--out", opt.out, "Output directory")->capture_default_str();
}

nmqj::MasterEquationModel resolve_model(const Options& opt, bool lamb_flag_given) {
    if (opt.model_path.empty() == opt.builtin.empty()) {
        throw nmqj::ConfigError("exactly one of --model or --builtin is required");
    }
    if (!opt.builtin.empty()) {
        return nmqj::builtin_model(opt.builtin, lamb_flag_given && opt.lamb_shift);
    }
    nmqj::MasterEquationModel model = nmqj::load_model_file(opt.model_path);
    if (lamb_flag_given) {
        if (opt.lamb_shift && !model.lamb_shift) {
            throw nmqj::ConfigError("--lamb-shift: model has no lamb_shift block");
        }
        if (model.lamb_shift) model.lamb_shift->enabled = opt.lamb_shift;
    }
    return model;
}

nmqj::RunConfig make_config(const Options& opt, nmqj::MasterEquationModel model) {
    nmqj::RunConfig config;
    config.model = std::move(model);
    config.ensemble_size = opt.n;
    config.dt = opt.dt;
    config.output_stride = opt.stride;
    config.seed = opt.seed;
    config.p_max = opt.p_max;
    config.out_dir = opt.out;
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo jump-process simulator for time-local master equations with "
                 "time-dependent, possibly negative decay rates"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Run the stochastic jump process and write timeseries/events/summary");
    add_model_options(simulate, opt);
    add_run_options(simulate, opt, true);

    CLI::App* integrate = app.add_subcommand(
        "integrate", "Directly integrate the master equation and report on positivity");
    add_model_options(integrate, opt);
    add_run_options(integrate, opt, false);

    CLI::App* compare = app.add_subcommand(
        "compare", "Run both the jump process and the direct integrator and compare");
    add_model_options(compare, opt);
    add_run_options(compare, opt, true);
    compare->add_flag("--self", opt.self_compare,
                      "Compare the direct integrator against itself (sanity check)");

    CLI::App* models = app.add_subcommand("models", "List builtin models");
    models->add_option("--dump", opt.dump_name, "Print a builtin model as canonical JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // help/version exit 0; bad arguments are config errors
    }

    try {
        if (models->parsed()) {
            return nmqj::cmd_models(opt.dump_name);
        }
        const bool lamb_flag_given = simulate->count("--lamb-shift") > 0 ||
                                     integrate->count("--lamb-shift") > 0 ||
                                     compare->count("--lamb-shift") > 0;
        nmqj::RunConfig config = make_config(opt, resolve_model(opt, lamb_flag_given));
        if (simulate->parsed()) return nmqj::cmd_simulate(config);
        if (integrate->parsed()) return nmqj::cmd_integrate(config);
        return nmqj::cmd_compare(config, opt.self_compare);
    } catch (const nmqj::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nmqj::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
