#include "nmqj/rates.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace nmqj {

namespace {

// sinh(z)/z, stable near z = 0.
std::complex<double> sinhc(std::complex<double> z) {
    if (std::abs(z) < 1e-6) {
        return 1.0 + z * z / 6.0;
    }
    return std::sinh(z) / z;
}

}  // namespace

RateFunction RateFunction::constant(double value) {
    if (!std::isfinite(value)) {
        throw ConfigError("rate: constant value must be finite");
    }
    RateFunction r;
    r.kind_ = Kind::Constant;
    r.value_ = value;
    return r;
}

RateFunction RateFunction::table(std::vector<double> times, std::vector<double> values) {
    if (times.empty() || times.size() != values.size()) {
        throw ConfigError("rate: table needs equally many times and values, at least one");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
            throw ConfigError("rate: table entries must be finite");
        }
        if (i > 0 && times[i] <= times[i - 1]) {
            throw ConfigError("rate: table times must be strictly increasing");
        }
    }
    RateFunction r;
    r.kind_ = Kind::Table;
    r.times_ = std::move(times);
    r.values_ = std::move(values);
    return r;
}

RateFunction RateFunction::jc_lorentzian(double gamma0, double lambda) {
    if (!(gamma0 > 0.0) || !(lambda > 0.0)) {
        throw ConfigError("rate: jc_lorentzian needs gamma0 > 0 and lambda > 0");
    }
    RateFunction r;
    r.kind_ = Kind::JCLorentzian;
    r.gamma0_ = gamma0;
    r.lambda_ = lambda;
    return r;
}

double RateFunction::delta(double t) const {
    switch (kind_) {
        case Kind::Constant:
            return value_;
        case Kind::Table: {
            if (t <= times_.front()) return values_.front();
            if (t >= times_.back()) return values_.back();
            auto it = std::upper_bound(times_.begin(), times_.end(), t);
            std::size_t hi = static_cast<std::size_t>(it - times_.begin());
            std::size_t lo = hi - 1;
            double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
            return values_[lo] + w * (values_[hi] - values_[lo]);
        }
        case Kind::JCLorentzian:
            return jc_log_derivative(t, false);
    }
    throw NumericalError("rate: unknown kind");
}

double RateFunction::lamb_shift(double t) const {
    if (kind_ != Kind::JCLorentzian) return 0.0;
    return jc_log_derivative(t, true);
}

// Returns -2 Re[cdot/c] (rate) or -2 Im[cdot/c] (Lamb shift).
// With c = e^{-lambda t/2} u(t), u = cosh(z) + (lambda/d) sinh(z), z = d t/2:
//   cdot/c = -lambda/2 + u'/u,  u' = (d/2) sinh(z) + (lambda/2) cosh(z).
double RateFunction::jc_log_derivative(double t, bool imaginary_part) const {
    using C = std::complex<double>;
    const C d = std::sqrt(C(lambda_ * lambda_ - 2.0 * gamma0_ * lambda_, 0.0));
    const C z = 0.5 * d * t;
    const C ch = std::cosh(z);
    const C sh_over_z = sinhc(z);
    // (lambda/d) sinh(z) written as lambda (t/2) sinh(z)/z so d -> 0 is regular.
    const C u = ch + lambda_ * (0.5 * t) * sh_over_z;
    const double scale = std::abs(ch) + std::abs(lambda_ * (0.5 * t) * sh_over_z);
    if (std::abs(u) <= 1e-12 * std::max(1.0, scale)) {
        throw RatePoleError(t);
    }
    const C uprime = 0.5 * d * (z * sh_over_z) + 0.5 * lambda_ * ch;
    const C log_deriv = -0.5 * lambda_ + uprime / u;
    const double out = imaginary_part ? -2.0 * log_deriv.imag() : -2.0 * log_deriv.real();
    if (!std::isfinite(out)) {
        throw RatePoleError(t);
    }
    return out;
}

double jc_amplitude_sq(double gamma0, double lambda, double t) {
    if (!(gamma0 > 0.0) || !(lambda > 0.0)) {
        throw ConfigError("jc_amplitude_sq: needs gamma0 > 0 and lambda > 0");
    }
    using C = std::complex<double>;
    const C d = std::sqrt(C(lambda * lambda - 2.0 * gamma0 * lambda, 0.0));
    const C z = 0.5 * d * t;
    const C u = std::cosh(z) + lambda * (0.5 * t) * sinhc(z);
    const double c_abs = std::exp(-0.5 * lambda * t) * std::abs(u);
    return c_abs * c_abs;
}

}  // namespace nmqj
