#include "nmqj/oracle.hpp"

#include <cmath>
#include <string>

#include "nmqj/format.hpp"

namespace nmqj {

namespace {

constexpr double kTraceTol = 1e-8;
constexpr double kLambdaNeg = -1e-12;  // eigenvalue threshold for "negative"

DensityMatrix rk4_step(const MasterEquationModel& model, double t, double h,
                       const DensityMatrix& rho) {
    const DensityMatrix k1 = generator_apply(model, t, rho);
    const DensityMatrix k2 = generator_apply(model, t + 0.5 * h, rho + (0.5 * h) * k1);
    const DensityMatrix k3 = generator_apply(model, t + 0.5 * h, rho + (0.5 * h) * k2);
    const DensityMatrix k4 = generator_apply(model, t + h, rho + h * k3);
    DensityMatrix next = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return 0.5 * (next + next.adjoint().eval());
}

void check_state(const DensityMatrix& rho, double t) {
    if (!rho.allFinite()) {
        throw NumericalError("integrate_master: non-finite state at t = " + std::to_string(t));
    }
    if (std::abs(rho.trace().real() - 1.0) > kTraceTol) {
        throw NumericalError("integrate_master: trace drifted beyond tolerance at t = " +
                             std::to_string(t));
    }
}

// RK4 over [ta, tb] with steps of size at most ~dt; no samples kept.
DensityMatrix integrate_span(const MasterEquationModel& model, DensityMatrix rho, double ta,
                             double tb, double dt) {
    const long long n = std::max(1LL, std::llround((tb - ta) / dt));
    const double h = (tb - ta) / static_cast<double>(n);
    for (long long i = 0; i < n; ++i) {
        rho = rk4_step(model, ta + static_cast<double>(i) * h, h, rho);
        check_state(rho, ta + static_cast<double>(i + 1) * h);
    }
    return rho;
}

}  // namespace

DensityTrajectory integrate_master(const MasterEquationModel& model, const DensityMatrix& rho0,
                                   double dt, int output_stride) {
    require_same_dim(rho0.rows(), model.dim, "integrate_master");
    if (!(dt > 0.0)) {
        throw ConfigError("integrate_master: dt must be positive");
    }
    if (output_stride < 1) {
        throw ConfigError("integrate_master: output stride must be at least 1");
    }
    if (!is_hermitian(rho0)) {
        throw ConfigError("integrate_master: initial state is not Hermitian");
    }
    if (std::abs(rho0.trace().real() - 1.0) > kTraceTol) {
        throw ConfigError("integrate_master: initial state does not have unit trace");
    }

    const long long n_steps = std::max(1LL, std::llround((model.t_end - model.t_start) / dt));
    const double h = (model.t_end - model.t_start) / static_cast<double>(n_steps);

    DensityTrajectory traj;
    traj.label = model.label;
    traj.dt = h;
    DensityMatrix rho = 0.5 * (rho0 + rho0.adjoint().eval());
    traj.times.push_back(model.t_start);
    traj.states.push_back(rho);
    for (long long i = 0; i < n_steps; ++i) {
        const double t = model.t_start + static_cast<double>(i) * h;
        rho = rk4_step(model, t, h, rho);
        const double t_next = model.t_start + static_cast<double>(i + 1) * h;
        check_state(rho, t_next);
        if ((i + 1) % output_stride == 0 || i + 1 == n_steps) {
            traj.times.push_back(t_next);
            traj.states.push_back(rho);
        }
    }
    return traj;
}

PositivityReport positivity_monitor(const DensityTrajectory& traj,
                                    const MasterEquationModel& model) {
    if (traj.times.empty() || traj.times.size() != traj.states.size()) {
        throw ConfigError("positivity_monitor: empty or inconsistent trajectory");
    }
    PositivityReport report;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto [lambda, phi] = hermitian_eigen_min(traj.states[i]);
        if (lambda >= kLambdaNeg) continue;

        double t0 = traj.times[i];
        DensityMatrix rho_at_t0 = traj.states[i];
        if (i > 0) {
            // Bisect the bracketing segment, re-integrating from the last
            // nonnegative sample, until the bracket is no wider than dt. t0 is
            // the first-negative end of the bracket.
            double lo = traj.times[i - 1];
            double hi = traj.times[i];
            DensityMatrix rho_lo = traj.states[i - 1];
            while (hi - lo > traj.dt) {
                const double mid = 0.5 * (lo + hi);
                DensityMatrix rho_mid = integrate_span(model, rho_lo, lo, mid, traj.dt);
                if (hermitian_eigen_min(rho_mid).first < kLambdaNeg) {
                    hi = mid;
                } else {
                    lo = mid;
                    rho_lo = std::move(rho_mid);
                }
            }
            t0 = hi;
            rho_at_t0 = integrate_span(model, rho_lo, lo, hi, traj.dt);
        }
        const auto [lambda0, phi0] = hermitian_eigen_min(rho_at_t0);
        report.violated = true;
        report.t0 = t0;
        report.phi0 = phi0;
        report.slope_check =
            phi0.dot(generator_apply(model, t0, rho_at_t0) * phi0).real();
        return report;
    }
    return report;
}

std::string density_trajectory_csv(const DensityTrajectory& traj) {
    const Eigen::Index dim = traj.states.empty() ? 0 : traj.states.front().rows();
    std::string out = "t";
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            const std::string rc = std::to_string(r) + "_" + std::to_string(c);
            out += ",re_" + rc + ",im_" + rc;
        }
    }
    out += ",lambda_min\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        out += format_double(traj.times[i]);
        const DensityMatrix& rho = traj.states[i];
        for (Eigen::Index r = 0; r < dim; ++r) {
            for (Eigen::Index c = 0; c < dim; ++c) {
                out += "," + format_double(rho(r, c).real());
                out += "," + format_double(rho(r, c).imag());
            }
        }
        out += "," + format_double(hermitian_eigen_min(rho).first);
        out += "\n";
    }
    return out;
}

}  // namespace nmqj
