#include "nmqj/model.hpp"

#include <algorithm>
#include <cmath>

namespace nmqj {

Hamiltonian Hamiltonian::constant(Operator H) {
    if (H.rows() != H.cols()) {
        throw ConfigError("hamiltonian: operator must be square");
    }
    Hamiltonian h;
    h.ops_.push_back(std::move(H));
    return h;
}

Hamiltonian Hamiltonian::table(std::vector<double> times, std::vector<Operator> ops) {
    if (times.size() < 2 || times.size() != ops.size()) {
        throw ConfigError("hamiltonian: table needs >= 2 knots with matching operators");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0 && times[i] <= times[i - 1]) {
            throw ConfigError("hamiltonian: table times must be strictly increasing");
        }
        if (ops[i].rows() != ops[i].cols() || ops[i].rows() != ops[0].rows()) {
            throw ConfigError("hamiltonian: table operators must be square with equal dims");
        }
    }
    Hamiltonian h;
    h.times_ = std::move(times);
    h.ops_ = std::move(ops);
    return h;
}

Operator Hamiltonian::at(double t) const {
    if (is_constant()) return ops_.front();
    if (t <= times_.front()) return ops_.front();
    if (t >= times_.back()) return ops_.back();
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    std::size_t lo = hi - 1;
    double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return ops_[lo] + w * (ops_[hi] - ops_[lo]);
}

Eigen::Index Hamiltonian::dim() const { return ops_.front().rows(); }

Channel::Channel(Operator op_, RateFunction rate_)
    : op(std::move(op_)), rate(std::move(rate_)) {
    if (op.rows() != op.cols()) {
        throw ConfigError("channel: jump operator must be square");
    }
    if (!op.allFinite()) {
        throw ConfigError("channel: jump operator entries must be finite");
    }
    if (op.cwiseAbs().maxCoeff() == 0.0) {
        throw ConfigError("channel: jump operator must be nonzero");
    }
    op_dag = op.adjoint();
    opdag_op = op_dag * op;
}

void MasterEquationModel::validate() const {
    if (dim < kMinDim || dim > kMaxDim) {
        throw ConfigError("model: dim must lie in [" + std::to_string(kMinDim) + ", " +
                          std::to_string(kMaxDim) + "]");
    }
    if (!(t_end > t_start) || !std::isfinite(t_start) || !std::isfinite(t_end)) {
        throw ConfigError("model: need finite t_start < t_end");
    }
    if (hamiltonian.dim() != dim) {
        throw ConfigError("model: hamiltonian dim does not match model dim");
    }
    // H must be Hermitian at the knots (linear interpolation preserves it).
    if (hamiltonian.is_constant()) {
        if (!is_hermitian(hamiltonian.constant_op())) {
            throw ConfigError("model: hamiltonian is not Hermitian");
        }
    } else {
        for (const auto& op : hamiltonian.table_ops()) {
            if (!is_hermitian(op)) {
                throw ConfigError("model: hamiltonian table entry is not Hermitian");
            }
        }
    }
    for (const auto& ch : channels) {
        if (ch.op.rows() != dim) {
            throw ConfigError("model: channel operator dim does not match model dim");
        }
    }
    if (lamb_shift) {
        if (lamb_shift->op.rows() != dim || lamb_shift->op.cols() != dim) {
            throw ConfigError("model: lamb shift operator dim does not match model dim");
        }
        if (!is_hermitian(lamb_shift->op)) {
            throw ConfigError("model: lamb shift operator must be Hermitian");
        }
        if (lamb_shift->channel < 0 ||
            lamb_shift->channel >= static_cast<int>(channels.size())) {
            throw ConfigError("model: lamb shift channel index out of range");
        }
    }
    if (initial.empty()) {
        throw ConfigError("model: initial ensemble must not be empty");
    }
    double weight_sum = 0.0;
    for (const auto& comp : initial) {
        if (comp.state.size() != dim) {
            throw ConfigError("model: initial state dim does not match model dim");
        }
        if (!is_normalized(comp.state)) {
            throw ConfigError("model: initial state is not normalized");
        }
        if (!(comp.weight > 0.0)) {
            throw ConfigError("model: initial weights must be positive");
        }
        weight_sum += comp.weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-9) {
        throw ConfigError("model: initial weights must sum to 1");
    }
    for (const auto& [name, op] : observables) {
        if (name.empty()) {
            throw ConfigError("model: observable needs a name");
        }
        if (op.rows() != dim || op.cols() != dim || !is_hermitian(op)) {
            throw ConfigError("model: observable '" + name + "' must be Hermitian of model dim");
        }
    }
}

Operator MasterEquationModel::hamiltonian_at(double t) const {
    Operator h = hamiltonian.at(t);
    if (lamb_shift && lamb_shift->enabled) {
        h += channels[static_cast<std::size_t>(lamb_shift->channel)].rate.lamb_shift(t) *
             lamb_shift->op;
    }
    return h;
}

std::vector<double> MasterEquationModel::rates_at(double t) const {
    std::vector<double> out;
    out.reserve(channels.size());
    for (const auto& ch : channels) out.push_back(ch.rate.delta(t));
    return out;
}

DensityMatrix MasterEquationModel::initial_density() const {
    DensityMatrix rho = DensityMatrix::Zero(dim, dim);
    for (const auto& comp : initial) {
        rho += comp.weight * (comp.state * comp.state.adjoint());
    }
    return rho;
}

std::pair<double, double> rate_split(double delta) {
    if (!std::isfinite(delta)) {
        throw NumericalError("rate_split: non-finite rate");
    }
    if (delta >= 0.0) return {delta, 0.0};
    return {0.0, -delta};
}

DensityMatrix generator_apply(const MasterEquationModel& model, double t,
                              const DensityMatrix& rho) {
    require_same_dim(rho.rows(), model.dim, "generator_apply");
    const Operator h = model.hamiltonian_at(t);
    const Complex i_unit(0.0, 1.0);
    DensityMatrix out = -i_unit * (h * rho - rho * h);
    for (const auto& ch : model.channels) {
        const double delta = ch.rate.delta(t);
        if (delta == 0.0) continue;
        out += delta * (ch.op * rho * ch.op_dag -
                        0.5 * (ch.opdag_op * rho + rho * ch.opdag_op));
    }
    return out;
}

StateVector drift_generator_apply(const MasterEquationModel& model, double t,
                                  const StateVector& psi) {
    require_same_dim(psi.size(), model.dim, "drift_generator_apply");
    const Complex i_unit(0.0, 1.0);
    StateVector out = -i_unit * (model.hamiltonian_at(t) * psi);
    for (const auto& ch : model.channels) {
        const double delta = ch.rate.delta(t);
        if (delta == 0.0) continue;
        const StateVector cpsi = ch.opdag_op * psi;
        const double expect = psi.dot(cpsi).real();  // <C†C>, real for any psi
        out += -0.5 * delta * (cpsi - expect * psi);
    }
    return out;
}

}  // namespace nmqj
