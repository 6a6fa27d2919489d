#include "nmqj/model_json.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>

namespace nmqj {

namespace {

using nlohmann::json;

void require_keys(const json& j, const char* where, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
    for (const char* key : required) {
        if (!j.contains(key)) {
            throw ConfigError(std::string(where) + ": missing field '" + key + "'");
        }
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto known = [&](const char* key) { return it.key() == key; };
        if (!std::any_of(required.begin(), required.end(), known) &&
            !std::any_of(optional.begin(), optional.end(), known)) {
            throw ConfigError(std::string(where) + ": unknown field '" + it.key() + "'");
        }
    }
}

Complex parse_complex(const json& j, const char* where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(std::string(where) + ": complex values must be [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Operator parse_operator(const json& j, int dim, const char* where) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim * dim) {
        throw ConfigError(std::string(where) + ": operator must be a row-major array of " +
                          std::to_string(dim * dim) + " [re, im] pairs");
    }
    Operator op(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            op(r, c) = parse_complex(j[static_cast<std::size_t>(r * dim + c)], where);
        }
    }
    return op;
}

StateVector parse_state(const json& j, int dim, const char* where) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim) {
        throw ConfigError(std::string(where) + ": state must be an array of " +
                          std::to_string(dim) + " [re, im] pairs");
    }
    StateVector psi(dim);
    for (int i = 0; i < dim; ++i) {
        psi(i) = parse_complex(j[static_cast<std::size_t>(i)], where);
    }
    return psi;
}

std::vector<double> parse_reals(const json& j, const char* where) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError(std::string(where) + ": expected a nonempty array of numbers");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) {
            throw ConfigError(std::string(where) + ": expected a nonempty array of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

RateFunction parse_rate(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
        throw ConfigError("rate: must be an object with a string 'kind'");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        require_keys(j, "rate(constant)", {"kind", "value"}, {});
        if (!j.at("value").is_number()) throw ConfigError("rate: 'value' must be a number");
        return RateFunction::constant(j.at("value").get<double>());
    }
    if (kind == "table") {
        require_keys(j, "rate(table)", {"kind", "times", "values"}, {});
        return RateFunction::table(parse_reals(j.at("times"), "rate: times"),
                                   parse_reals(j.at("values"), "rate: values"));
    }
    if (kind == "jc_lorentzian") {
        require_keys(j, "rate(jc_lorentzian)", {"kind", "gamma0", "lambda"}, {});
        if (!j.at("gamma0").is_number() || !j.at("lambda").is_number()) {
            throw ConfigError("rate: 'gamma0' and 'lambda' must be numbers");
        }
        return RateFunction::jc_lorentzian(j.at("gamma0").get<double>(),
                                           j.at("lambda").get<double>());
    }
    throw ConfigError("rate: unknown kind '" + kind + "'");
}

json dump_complex(Complex z) { return json::array({z.real(), z.imag()}); }

json dump_operator(const Operator& op) {
    json out = json::array();
    for (Eigen::Index r = 0; r < op.rows(); ++r) {
        for (Eigen::Index c = 0; c < op.cols(); ++c) {
            out.push_back(dump_complex(op(r, c)));
        }
    }
    return out;
}

json dump_state(const StateVector& psi) {
    json out = json::array();
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        out.push_back(dump_complex(psi(i)));
    }
    return out;
}

json dump_rate(const RateFunction& rate) {
    json out;
    switch (rate.kind()) {
        case RateFunction::Kind::Constant:
            out["kind"] = "constant";
            out["value"] = rate.constant_value();
            break;
        case RateFunction::Kind::Table:
            out["kind"] = "table";
            out["times"] = rate.table_times();
            out["values"] = rate.table_values();
            break;
        case RateFunction::Kind::JCLorentzian:
            out["kind"] = "jc_lorentzian";
            out["gamma0"] = rate.gamma0();
            out["lambda"] = rate.lambda();
            break;
    }
    return out;
}

MasterEquationModel parse_model(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("model: top level must be a JSON object");
    }
    require_keys(j, "model", {"label", "dim", "hamiltonian", "channels", "t_start", "t_end"},
                 {"initial", "lamb_shift", "observables"});

    MasterEquationModel model;
    if (!j.at("label").is_string()) throw ConfigError("model: 'label' must be a string");
    model.label = j.at("label").get<std::string>();
    if (!j.at("dim").is_number_integer()) throw ConfigError("model: 'dim' must be an integer");
    model.dim = j.at("dim").get<int>();
    if (model.dim < kMinDim || model.dim > kMaxDim) {
        throw ConfigError("model: dim must lie in [" + std::to_string(kMinDim) + ", " +
                          std::to_string(kMaxDim) + "]");
    }

    const json& jh = j.at("hamiltonian");
    if (jh.is_array()) {
        model.hamiltonian = Hamiltonian::constant(parse_operator(jh, model.dim, "hamiltonian"));
    } else if (jh.is_object()) {
        require_keys(jh, "hamiltonian", {"kind", "times", "ops"}, {});
        if (!jh.at("kind").is_string() || jh.at("kind").get<std::string>() != "table") {
            throw ConfigError("hamiltonian: object form must have kind \"table\"");
        }
        if (!jh.at("ops").is_array()) throw ConfigError("hamiltonian: 'ops' must be an array");
        std::vector<Operator> ops;
        for (const auto& op : jh.at("ops")) {
            ops.push_back(parse_operator(op, model.dim, "hamiltonian"));
        }
        model.hamiltonian =
            Hamiltonian::table(parse_reals(jh.at("times"), "hamiltonian: times"), std::move(ops));
    } else {
        throw ConfigError("hamiltonian: must be an operator array or a table object");
    }

    if (!j.at("channels").is_array() || j.at("channels").empty()) {
        throw ConfigError("model: 'channels' must be a nonempty array");
    }
    for (const auto& jc : j.at("channels")) {
        require_keys(jc, "channel", {"operator", "rate"}, {});
        model.channels.emplace_back(parse_operator(jc.at("operator"), model.dim, "channel"),
                                    parse_rate(jc.at("rate")));
    }

    if (!j.at("t_start").is_number() || !j.at("t_end").is_number()) {
        throw ConfigError("model: 't_start' and 't_end' must be numbers");
    }
    model.t_start = j.at("t_start").get<double>();
    model.t_end = j.at("t_end").get<double>();

    if (j.contains("initial")) {
        if (!j.at("initial").is_array() || j.at("initial").empty()) {
            throw ConfigError("model: 'initial' must be a nonempty array");
        }
        for (const auto& jcomp : j.at("initial")) {
            require_keys(jcomp, "initial component", {"state"}, {"weight"});
            InitialComponent comp;
            comp.state = parse_state(jcomp.at("state"), model.dim, "initial");
            if (jcomp.contains("weight")) {
                if (!jcomp.at("weight").is_number()) {
                    throw ConfigError("initial: 'weight' must be a number");
                }
                comp.weight = jcomp.at("weight").get<double>();
            }
            model.initial.push_back(std::move(comp));
        }
    } else {
        model.initial.push_back({basis_state(model.dim, 0), 1.0});
    }

    if (j.contains("lamb_shift")) {
        const json& jl = j.at("lamb_shift");
        require_keys(jl, "lamb_shift", {"operator", "channel"}, {"enabled"});
        LambShift ls;
        ls.op = parse_operator(jl.at("operator"), model.dim, "lamb_shift");
        if (!jl.at("channel").is_number_integer()) {
            throw ConfigError("lamb_shift: 'channel' must be an integer");
        }
        ls.channel = jl.at("channel").get<int>();
        if (jl.contains("enabled")) {
            if (!jl.at("enabled").is_boolean()) {
                throw ConfigError("lamb_shift: 'enabled' must be a boolean");
            }
            ls.enabled = jl.at("enabled").get<bool>();
        }
        model.lamb_shift = std::move(ls);
    }

    if (j.contains("observables")) {
        if (!j.at("observables").is_array()) {
            throw ConfigError("model: 'observables' must be an array");
        }
        for (const auto& jo : j.at("observables")) {
            require_keys(jo, "observable", {"name", "operator"}, {});
            if (!jo.at("name").is_string()) {
                throw ConfigError("observable: 'name' must be a string");
            }
            model.observables.emplace_back(
                jo.at("name").get<std::string>(),
                parse_operator(jo.at("operator"), model.dim, "observable"));
        }
    }

    model.validate();
    return model;
}

}  // namespace

MasterEquationModel model_from_json(const nlohmann::json& j) {
    try {
        return parse_model(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model: malformed document (") + e.what() + ")");
    }
}

MasterEquationModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open model file '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("model file '" + path + "' is not valid JSON: " + e.what());
    }
    return model_from_json(j);
}

nlohmann::json model_to_json(const MasterEquationModel& model) {
    json j;
    j["label"] = model.label;
    j["dim"] = model.dim;
    if (model.hamiltonian.is_constant()) {
        j["hamiltonian"] = dump_operator(model.hamiltonian.constant_op());
    } else {
        json jh;
        jh["kind"] = "table";
        jh["times"] = model.hamiltonian.table_times();
        jh["ops"] = json::array();
        for (const auto& op : model.hamiltonian.table_ops()) {
            jh["ops"].push_back(dump_operator(op));
        }
        j["hamiltonian"] = std::move(jh);
    }
    j["channels"] = json::array();
    for (const auto& ch : model.channels) {
        json jc;
        jc["operator"] = dump_operator(ch.op);
        jc["rate"] = dump_rate(ch.rate);
        j["channels"].push_back(std::move(jc));
    }
    j["t_start"] = model.t_start;
    j["t_end"] = model.t_end;
    j["initial"] = json::array();
    for (const auto& comp : model.initial) {
        json jcomp;
        jcomp["state"] = dump_state(comp.state);
        jcomp["weight"] = comp.weight;
        j["initial"].push_back(std::move(jcomp));
    }
    if (model.lamb_shift) {
        json jl;
        jl["operator"] = dump_operator(model.lamb_shift->op);
        jl["channel"] = model.lamb_shift->channel;
        jl["enabled"] = model.lamb_shift->enabled;
        j["lamb_shift"] = std::move(jl);
    }
    if (!model.observables.empty()) {
        j["observables"] = json::array();
        for (const auto& [name, op] : model.observables) {
            json jo;
            jo["name"] = name;
            jo["operator"] = dump_operator(op);
            j["observables"].push_back(std::move(jo));
        }
    }
    return j;
}

std::string canonical_model_json(const MasterEquationModel& model) {
    return model_to_json(model).dump(2) + "\n";
}

}  // namespace nmqj
