// model.hpp — master-equation model: Hamiltonian, decay channels, rate decomposition,
// and application of the time-local generator
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nmqj/hilbert.hpp"
#include "nmqj/rates.hpp"

namespace nmqj {

// H(t): constant operator or table of operators with linear interpolation
// (clamped at the ends). Hermiticity is validated at the knots.
class Hamiltonian {
public:
    static Hamiltonian constant(Operator H);
    static Hamiltonian table(std::vector<double> times, std::vector<Operator> ops);

    Operator at(double t) const;
    Eigen::Index dim() const;
    bool is_constant() const { return times_.empty(); }

    const Operator& constant_op() const { return ops_.front(); }
    const std::vector<double>& table_times() const { return times_; }
    const std::vector<Operator>& table_ops() const { return ops_; }

private:
    Hamiltonian() = default;
    std::vector<double> times_;  // empty for constant
    std::vector<Operator> ops_;
};

// One decay channel (C_m, Delta_m(t)). The jump operator is constant in time;
// C† and C†C are cached at construction.
struct Channel {
    Channel(Operator op_, RateFunction rate_);

    Operator op;
    Operator op_dag;
    Operator opdag_op;  // C†C
    RateFunction rate;
};

// Optional Hermitian correction S(t)·L added to H(t), with the scalar S(t)
// supplied by one channel's rate function (the Lamb shift of the exact
// two-level model). Off by default.
struct LambShift {
    Operator op;
    int channel = 0;
    bool enabled = false;
};

// One component of the initial ensemble: a pure state with a weight.
struct InitialComponent {
    StateVector state;
    double weight = 1.0;
};

struct MasterEquationModel {
    std::string label;
    int dim = 0;
    Hamiltonian hamiltonian = Hamiltonian::constant(Operator::Zero(2, 2));
    std::vector<Channel> channels;
    double t_start = 0.0;
    double t_end = 1.0;
    std::optional<LambShift> lamb_shift;
    std::vector<InitialComponent> initial;  // defaults to the first basis state
    std::vector<std::pair<std::string, Operator>> observables;

    // Throws ConfigError on any broken invariant (dims, Hermiticity of H at
    // sampled times, empty channels operators, span, initial state norms).
    void validate() const;

    // H(t) including the Lamb-shift term when enabled.
    Operator hamiltonian_at(double t) const;

    // All Delta_m(t), in channel declaration order.
    std::vector<double> rates_at(double t) const;

    DensityMatrix initial_density() const;
};

// Delta = Delta_plus - Delta_minus with Delta_plus * Delta_minus = 0:
// Delta_pm = (|Delta| ± Delta) / 2.
std::pair<double, double> rate_split(double delta);

// d(rho)/dt = -i[H, rho] + sum_m Delta_m(t) [C rho C† - (1/2){C†C, rho}].
DensityMatrix generator_apply(const MasterEquationModel& model, double t, const DensityMatrix& rho);

// Value of -i G(t)|psi> with the normalized drift generator
// G = H - (i/2) sum_m Delta_m [C†C - <psi|C†C|psi>].
StateVector drift_generator_apply(const MasterEquationModel& model, double t, const StateVector& psi);

}  // namespace nmqj
