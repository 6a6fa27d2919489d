// rates.hpp — time-dependent decay rates Delta_m(t) of the master-equation channels
#pragma once

#include <vector>

#include "nmqj/errors.hpp"

namespace nmqj {

// A scalar decay rate Delta(t). Three families:
//   constant       — fixed value, any sign
//   table          — linear interpolation on strictly increasing knots,
//                    clamped (constant) extrapolation at both ends
//   jc_lorentzian  — Delta(t) = -2 Re[cdot(t)/c(t)] for the damped two-level
//                    atom with Lorentzian coupling,
//                    c(t) = e^{-lambda t/2} [cosh(d t/2) + (lambda/d) sinh(d t/2)],
//                    d = sqrt(lambda^2 - 2 gamma0 lambda)  (complex d allowed).
//                    Evaluation at a zero of c(t) is a genuine pole of the
//                    generator and raises RatePoleError; no regularization.
class RateFunction {
public:
    enum class Kind { Constant, Table, JCLorentzian };

    static RateFunction constant(double value);
    static RateFunction table(std::vector<double> times, std::vector<double> values);
    static RateFunction jc_lorentzian(double gamma0, double lambda);

    Kind kind() const { return kind_; }

    // Delta(t) in units of 1/time.
    double delta(double t) const;

    // Accompanying Lamb-shift scalar S(t) = -2 Im[cdot(t)/c(t)].
    // Identically zero for constant and table rates.
    double lamb_shift(double t) const;

    // Accessors for serialization.
    double constant_value() const { return value_; }
    const std::vector<double>& table_times() const { return times_; }
    const std::vector<double>& table_values() const { return values_; }
    double gamma0() const { return gamma0_; }
    double lambda() const { return lambda_; }

private:
    RateFunction() = default;

    double jc_log_derivative(double t, bool imaginary_part) const;

    Kind kind_ = Kind::Constant;
    double value_ = 0.0;
    std::vector<double> times_;
    std::vector<double> values_;
    double gamma0_ = 0.0;
    double lambda_ = 0.0;
};

// |c(t)|^2 for the damped two-level model behind the jc_lorentzian rate: the
// exact excited-population decay factor, rho_ee(t) = |c(t)/c(s)|^2 rho_ee(s).
double jc_amplitude_sq(double gamma0, double lambda, double t);

}  // namespace nmqj
