// test_oracle.cpp — direct master-equation integration and the positivity monitor
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "nmqj/oracle.hpp"
#include "nmqj/registry.hpp"
#include "test_support.hpp"

using namespace nmqj;
using namespace nmqj::testing;

TEST_CASE("constant damping integrates to the exponential law") {
    MasterEquationModel m = damping_model(1.0, 1.0);
    const auto traj = integrate_master(m, m.initial_density(), 1e-3, 10);
    REQUIRE(traj.times.front() == 0.0);
    REQUIRE(traj.times.back() == doctest::Approx(1.0));
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        CHECK(traj.states[i](0, 0).real() ==
              doctest::Approx(std::exp(-traj.times[i])).epsilon(1e-6));
        CHECK(std::abs(traj.states[i].trace() - Complex(1.0)) <= 1e-8);
        CHECK((traj.states[i] - traj.states[i].adjoint().eval()).norm() == 0.0);
    }
}

TEST_CASE("closed-system coherences precess at the level splitting") {
    MasterEquationModel m;
    m.label = "precession";
    m.dim = 2;
    const double omega = 0.9;
    Operator h = Operator::Zero(2, 2);
    h(0, 0) = omega / 2.0;
    h(1, 1) = -omega / 2.0;
    m.hamiltonian = Hamiltonian::constant(h);
    m.t_start = 0.0;
    m.t_end = 4.0;
    StateVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    m.initial.push_back({plus, 1.0});
    m.validate();

    const auto traj = integrate_master(m, m.initial_density(), 1e-3, 100);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const Complex expected = 0.5 * std::exp(Complex(0.0, -omega * traj.times[i]));
        CHECK(std::abs(traj.states[i](0, 1) - expected) < 1e-6);
        CHECK(traj.states[i](0, 0).real() == doctest::Approx(0.5).epsilon(1e-9));
    }
}

TEST_CASE("lorentzian-rate integration reproduces the exact population ratio") {
    // Over the simulated span the excited population scales by
    // |c(t)|^2 / |c(t_start)|^2 — an analytic benchmark independent of the
    // integrator.
    const MasterEquationModel m = builtin_model("jc_lorentzian", true);
    const auto traj = integrate_master(m, m.initial_density(), 1e-3, 50);
    const double p_start = traj.states.front()(0, 0).real();
    const double c_start = jc_amplitude_sq(1.0, 0.3, traj.times.front());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double expected = p_start * jc_amplitude_sq(1.0, 0.3, traj.times[i]) / c_start;
        CHECK(traj.states[i](0, 0).real() == doctest::Approx(expected).epsilon(1e-5));
    }
}

TEST_CASE("integration error falls at fourth order in the step") {
    std::mt19937_64 rng(81);
    for (int trial = 0; trial < 4; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 3);
        auto fx = random_discrepancy_fixture(dim, rng);
        fx.model.t_end = 0.5;
        const DensityMatrix rho0 = fx.model.initial_density();
        const auto ref = integrate_master(fx.model, rho0, 0.02 / 64.0, 1 << 24);
        const auto h1 = integrate_master(fx.model, rho0, 0.02, 1 << 24);
        const auto h2 = integrate_master(fx.model, rho0, 0.01, 1 << 24);
        const double e1 = (h1.states.back() - ref.states.back()).norm();
        const double e2 = (h2.states.back() - ref.states.back()).norm();
        REQUIRE(e2 > 1e-13);
        CHECK(e1 / e2 > 14.0);
        CHECK(e1 / e2 < 18.0);
    }
}

TEST_CASE("the sample grid covers start, stride multiples, and the endpoint") {
    MasterEquationModel m = damping_model(1.0, 1.0);
    const auto traj = integrate_master(m, m.initial_density(), 1e-3, 300);
    REQUIRE(traj.times.size() == 5);  // 0, 0.3, 0.6, 0.9, 1.0
    CHECK(traj.times[1] == doctest::Approx(0.3));
    CHECK(traj.times[3] == doctest::Approx(0.9));
    CHECK(traj.times[4] == doctest::Approx(1.0));
    CHECK(traj.dt == doctest::Approx(1e-3));
}

TEST_CASE("bad initial densities and runaway generators are rejected") {
    MasterEquationModel m = damping_model(1.0, 1.0);
    DensityMatrix not_unit_trace = DensityMatrix::Identity(2, 2);
    CHECK_THROWS_AS((void)integrate_master(m, not_unit_trace, 1e-3, 10), ConfigError);
    DensityMatrix not_hermitian = DensityMatrix::Zero(2, 2);
    not_hermitian(0, 1) = 1.0;
    not_hermitian(0, 0) = 1.0;
    CHECK_THROWS_AS((void)integrate_master(m, not_hermitian, 1e-3, 10), ConfigError);
    CHECK_THROWS_AS((void)integrate_master(m, m.initial_density(), 0.0, 10), ConfigError);

    // A large negative rate drives exponential growth; the trace guard trips.
    MasterEquationModel runaway = damping_model(-40.0, 2.0);
    StateVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    runaway.initial[0].state = plus;
    runaway.validate();
    CHECK_THROWS_AS((void)integrate_master(runaway, runaway.initial_density(), 1e-2, 10),
                    NumericalError);
}

TEST_CASE("monitor stays quiet on positive evolutions") {
    MasterEquationModel m = damping_model(1.0, 3.0);
    const auto traj = integrate_master(m, m.initial_density(), 1e-3, 10);
    const auto report = positivity_monitor(traj, m);
    CHECK_FALSE(report.violated);
    CHECK_FALSE(report.t0.has_value());

    // A negative rate window alone does not break positivity here: the
    // two-level dynamics with this window stays a valid state family.
    const MasterEquationModel jc = builtin_model("jc_lorentzian");
    const auto jtraj = integrate_master(jc, jc.initial_density(), 1e-3, 10);
    CHECK_FALSE(positivity_monitor(jtraj, jc).violated);
    CHECK(jc.channels[0].rate.delta(7.0) < 0.0);  // the window really is crossed
}

TEST_CASE("monitor localizes the crossing of the two-channel toy model") {
    // Strong damping squeezes the excited population to ~1.5e-2, then a
    // second channel opens with a negative rate of slope -2 acting on the
    // near-empty level: lambda_min crosses zero at t ~ 2.2126 with slope -2.
    const MasterEquationModel m = builtin_model("pv_toy");
    const auto traj = integrate_master(m, m.initial_density(), 1e-3, 10);
    const auto report = positivity_monitor(traj, m);
    REQUIRE(report.violated);
    REQUIRE(report.t0.has_value());
    REQUIRE(report.slope_check.has_value());
    REQUIRE(report.phi0.has_value());
    CHECK(*report.t0 == doctest::Approx(2.2126).epsilon(2e-3));
    CHECK(*report.slope_check < 0.0);
    CHECK(*report.slope_check == doctest::Approx(-2.0).epsilon(0.05));
    // The direction that goes negative is the depleted excited level.
    CHECK(std::abs((*report.phi0)(0)) == doctest::Approx(1.0).epsilon(1e-3));

    // The bisection pins t0 down to the integration step.
    const double drop_in =
        hermitian_eigen_min(traj.states.front()).first;  // sanity: starts positive
    CHECK(drop_in >= -1e-12);
}

TEST_CASE("monitor flags a trajectory that starts negative at its first sample") {
    const MasterEquationModel m = damping_model(1.0, 1.0);
    DensityTrajectory traj;
    traj.times = {0.0, 0.5};
    DensityMatrix bad = DensityMatrix::Zero(2, 2);
    bad(0, 0) = 1.2;
    bad(1, 1) = -0.2;
    traj.states = {bad, bad};
    traj.label = "handmade";
    traj.dt = 1e-3;
    const auto report = positivity_monitor(traj, m);
    REQUIRE(report.violated);
    CHECK(*report.t0 == 0.0);
}

TEST_CASE("csv export carries the grid, the matrix entries, and the eigenvalue floor") {
    MasterEquationModel m = damping_model(1.0, 1.0);
    const auto traj = integrate_master(m, m.initial_density(), 1e-3, 500);
    const std::string csv = density_trajectory_csv(traj);
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "t,re_0_0,im_0_0,re_0_1,im_0_1,re_1_0,im_1_0,re_1_1,im_1_1,lambda_min");
    std::size_t rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == traj.times.size());
    CHECK(csv.substr(csv.size() - 1) == "\n");
}
