#include "geolangevin/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geolangevin/berry_phase.hpp"
#include "geolangevin/errors.hpp"
#include "geolangevin/langevin.hpp"

namespace geolangevin {

namespace {

template <class F>
double integrate(F&& f, double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    return gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-12, &error);
}

double tau_over_duration(const ModelParams& p) { return p.relaxation_time() / p.duration; }

}  // namespace

double bandwidth_integral(double x_c, double x_b) {
    if (!(x_c > 0.0)) throw DomainError("bandwidth integral diverges for x_c <= 0");
    if (std::isnan(x_b) || x_b < x_c) throw DomainError("bandwidth integral needs x_b >= x_c");
    if (x_b == x_c) return 0.0;
    auto f = [](double x) {
        const double q = 1.0 + x * x;
        return 1.0 / (x * x * q * q);
    };
    // Split at x = 1 so the 1/x^2 head and the x^-6 tail are handled separately.
    if (x_b <= 1.0 || x_c >= 1.0) return integrate(f, x_c, x_b);
    return integrate(f, x_c, 1.0) + integrate(f, 1.0, x_b);
}

double kappa(double x_c, double x_b, double tau_over_T) {
    if (!(tau_over_T >= 0.0)) throw DomainError("kappa needs tau/T >= 0");
    return std::sqrt(3.0 * tau_over_T * bandwidth_integral(x_c, x_b) / std::numbers::pi);
}

double mean_shift(const ModelParams& params) {
    return accumulate_phase(homogeneous_solution(params)).shift;
}

double sigma_analytic(const ModelParams& params) {
    params.validate();
    const double tau = params.relaxation_time();
    const double integral = bandwidth_integral(params.omega_c() * tau, params.omega_b() * tau);
    const double rbar2 = norm2(params.mean_point());
    const double eta = params.friction;
    const double kT = params.kT;
    const double gap2 = norm2(params.end - params.start);
    const double prefactor = params.mass * kT / (eta * eta * rbar2);
    const double bracket = gap2 / rbar2 + kT / (eta * rbar2 / params.duration);
    return (params.hbar / params.duration) *
           std::sqrt(prefactor * bracket * integral / std::numbers::pi);
}

double sigma_simplified(const ModelParams& params) {
    params.validate();
    const double tau = params.relaxation_time();
    const double k = kappa(params.omega_c() * tau, params.omega_b() * tau, tau_over_duration(params));
    return params.kT * params.hbar / (params.friction * norm2(params.mean_point())) * k;
}

LowNoiseCheck low_noise_check(const ModelParams& params, double threshold) {
    LowNoiseCheck out;
    out.margin = params.kT * params.duration / (params.friction * norm2(params.mean_point()));
    out.ok = out.margin < threshold;
    return out;
}

MsdPrediction msd_prediction(double t, const ModelParams& params) {
    if (!(t >= 0.0)) throw DomainError("msd prediction needs t >= 0");
    constexpr int dims = 2;
    const double one = 2.0 * params.kT / params.friction * t;
    return {dims * one, one};
}

Predictions predict(const ModelParams& params, double low_noise_threshold) {
    params.validate();
    Predictions p;
    const double tau = params.relaxation_time();
    p.x_c = params.omega_c() * tau;
    p.x_b = params.omega_b() * tau;
    p.kappa = kappa(p.x_c, p.x_b, tau_over_duration(params));
    p.mean_shift = mean_shift(params);
    p.sigma = sigma_analytic(params);
    p.sigma_simplified = params.kT * params.hbar / (params.friction * norm2(params.mean_point())) * p.kappa;
    const LowNoiseCheck ln = low_noise_check(params, low_noise_threshold);
    p.low_noise_margin = ln.margin;
    p.low_noise = ln.ok;
    const detail::GeneratingConstants c = detail::generating_constants(params);
    p.c1 = p.mean_shift;
    p.c2 = c.c2;
    p.c3 = c.c3;
    return p;
}

namespace detail {

GeneratingConstants generating_constants(const ModelParams& params) {
    const double rbar2 = norm2(params.mean_point());
    const double eta = params.friction;
    const double kT = params.kT;
    const double T = params.duration;
    GeneratingConstants c{};
    c.c1 = mean_shift(params);
    c.c2 = eta * kT * params.hbar * params.hbar / (T * T * rbar2 * rbar2);
    c.c3 = kT > 0.0 ? params.mass * rbar2 / (2.0 * eta * eta * kT) : std::numeric_limits<double>::infinity();
    c.e = -2.0 * eta * kT * params.hbar / T;
    return c;
}

FrequencyTerms frequency_terms(const ModelParams& params, double omega, double r0_abs2) {
    const double m = params.mass;
    const double eta = params.friction;
    const double w2 = omega * omega;
    const double op = m * m * w2 * w2 + eta * eta * w2;
    const double f4_root = eta * params.kT * params.hbar * omega /
                           (params.duration * norm2(params.mean_point()));
    return {r0_abs2 * op, op * op, f4_root * f4_root};
}

double variance_from_frequency_integrals(const ModelParams& params) {
    const GeneratingConstants c = generating_constants(params);
    const double gap2 = norm2(params.end - params.start);
    const double tau = params.relaxation_time();
    auto r0_abs2 = [&](double w) {
        const double x = w * tau;
        return gap2 / (w * w * (1.0 + x * x));
    };
    auto first = [&](double w) {
        const FrequencyTerms f = frequency_terms(params, w, r0_abs2(w));
        return w * w * f.f1 / f.f3;
    };
    auto second = [&](double w) {
        const FrequencyTerms f = frequency_terms(params, w, 0.0);
        return f.f4 / f.f3;
    };
    const double lo = params.omega_c();
    const double hi = params.omega_b();
    // Split at the crossover omega = eta/M.
    const double mid = std::clamp(1.0 / tau, lo, std::isfinite(hi) ? hi : std::max(lo, 1.0 / tau));
    auto piece = [&](auto&& f) {
        double total = 0.0;
        if (mid > lo) total += integrate(f, lo, mid);
        if (hi > mid) total += integrate(f, mid, hi);
        return total / std::numbers::pi;
    };
    return c.c2 * piece(first) + params.duration * piece(second);
}

}  // namespace detail

}  // namespace geolangevin
