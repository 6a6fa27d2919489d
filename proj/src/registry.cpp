#include "nmqj/registry.hpp"

#include <cmath>

#include "nmqj/rates.hpp"

namespace nmqj {

namespace {

// Basis convention throughout the registry: index 0 = excited, index 1 = ground.
Operator sigma_minus() {
    Operator op = Operator::Zero(2, 2);
    op(1, 0) = 1.0;
    return op;
}

Operator sigma_x() {
    Operator op = Operator::Zero(2, 2);
    op(0, 1) = 1.0;
    op(1, 0) = 1.0;
    return op;
}

Operator excited_projector() {
    Operator op = Operator::Zero(2, 2);
    op(0, 0) = 1.0;
    return op;
}

MasterEquationModel markov_ad() {
    MasterEquationModel m;
    m.label = "markov_ad";
    m.dim = 2;
    m.hamiltonian = Hamiltonian::constant(Operator::Zero(2, 2));
    m.channels.emplace_back(sigma_minus(), RateFunction::constant(1.0));
    m.t_start = 0.0;
    m.t_end = 5.0;
    m.initial.push_back({basis_state(2, 0), 1.0});
    m.observables.emplace_back("excited_population", excited_projector());
    return m;
}

MasterEquationModel jc_lorentzian(bool lamb_shift_enabled) {
    const double gamma0 = 1.0;
    const double lambda = 0.3;
    const double t_start = 6.5;

    MasterEquationModel m;
    m.label = "jc_lorentzian";
    m.dim = 2;
    m.hamiltonian = Hamiltonian::constant(Operator::Zero(2, 2));
    m.channels.emplace_back(sigma_minus(), RateFunction::jc_lorentzian(gamma0, lambda));
    // For gamma0 = 1, lambda = 0.3 the amplitude c(t) vanishes at t ~ 5.513
    // and t ~ 14.31; the decay rate has poles there and is negative on
    // (5.513, 8.798). The span sits between the poles, starting inside the
    // negative-rate window. The initial ensemble carries the populations the
    // decay reaches at t_start, diag(|c(t_start)|^2, 1 - |c(t_start)|^2), so
    // rho_ee(t) = |c(t)|^2 on the whole span: it revives while the rate is
    // negative and decays again once the rate turns positive.
    m.t_start = t_start;
    m.t_end = 12.0;
    const double p_excited = jc_amplitude_sq(gamma0, lambda, t_start);
    m.initial.push_back({basis_state(2, 0), p_excited});
    m.initial.push_back({basis_state(2, 1), 1.0 - p_excited});
    // Exact Hamiltonian correction S(t)/2 * sigma_+ sigma_-; S(t) vanishes
    // identically for this resonant family (real c), so enabling it is exact
    // but inert.
    m.lamb_shift = LambShift{0.5 * excited_projector(), 0, lamb_shift_enabled};
    m.observables.emplace_back("excited_population", excited_projector());
    return m;
}

MasterEquationModel table_demo() {
    MasterEquationModel m;
    m.label = "table_demo";
    m.dim = 2;
    Operator h = Operator::Zero(2, 2);
    h(0, 0) = 0.5;
    h(1, 1) = -0.5;
    m.hamiltonian = Hamiltonian::constant(h);
    m.channels.emplace_back(sigma_minus(),
                            RateFunction::table({0.0, 1.0, 2.0}, {1.0, 0.25, 1.0}));
    m.t_start = 0.0;
    m.t_end = 2.0;
    StateVector plus(2);
    plus << Complex(1.0 / std::sqrt(2.0), 0.0), Complex(1.0 / std::sqrt(2.0), 0.0);
    m.initial.push_back({plus, 1.0});
    m.observables.emplace_back("excited_population", excited_projector());
    return m;
}

MasterEquationModel pv_toy() {
    MasterEquationModel m;
    m.label = "pv_toy";
    m.dim = 2;
    m.hamiltonian = Hamiltonian::constant(Operator::Zero(2, 2));
    // Phase one: amplitude damping drains the excited population down to
    // a(2.2) = e^{-4.2} ~ 0.015. Phase two: a bit-flip channel at negative
    // rate pushes it on linearly through zero — the generator loses
    // positivity at t0 ~ 2.2126 with eigenvalue slope -2, and the jump
    // process halts once the excited trajectory empties. Opening the negative
    // channel only after the population is this small keeps the halting time
    // of a 10^4-member ensemble within a few steps of t0.
    m.channels.emplace_back(
        sigma_minus(), RateFunction::table({0.0, 2.0, 2.2, 3.0}, {2.0, 2.0, 0.0, 0.0}));
    m.channels.emplace_back(
        sigma_x(), RateFunction::table({0.0, 2.2, 2.21, 3.0}, {0.0, 0.0, -2.0, -2.0}));
    m.t_start = 0.0;
    m.t_end = 3.0;
    m.initial.push_back({basis_state(2, 0), 1.0});
    m.observables.emplace_back("excited_population", excited_projector());
    return m;
}

}  // namespace

const std::vector<BuiltinInfo>& builtin_models() {
    static const std::vector<BuiltinInfo> infos = {
        {"markov_ad", "two-level amplitude damping at constant unit rate (exact decay e^{-t})"},
        {"jc_lorentzian",
         "damped two-level atom, Lorentzian reservoir (gamma0 = 1, lambda = 0.3): the decay "
         "rate turns negative in-span and the excited population revives"},
        {"table_demo", "editable template: sigma_- with a table rate dipping to 0.25 under "
                       "H = sigma_z / 2"},
        {"pv_toy", "two-channel toy whose generator loses positivity in-span; simulation "
                   "halts with a breakdown event"},
    };
    return infos;
}

MasterEquationModel builtin_model(const std::string& name, bool lamb_shift_enabled) {
    MasterEquationModel m;
    if (name == "markov_ad") {
        m = markov_ad();
    } else if (name == "jc_lorentzian") {
        m = jc_lorentzian(lamb_shift_enabled);
    } else if (name == "table_demo") {
        m = table_demo();
    } else if (name == "pv_toy") {
        m = pv_toy();
    } else {
        throw ConfigError("unknown builtin model '" + name + "' (see the models command)");
    }
    if (lamb_shift_enabled && !m.lamb_shift) {
        throw ConfigError("model '" + name + "' has no Lamb-shift term");
    }
    m.validate();
    return m;
}

}  // namespace nmqj
