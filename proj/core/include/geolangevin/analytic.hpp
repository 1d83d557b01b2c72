#pragma once

#include "geolangevin/params.hpp"

namespace geolangevin {

/// Closed-form low-noise predictions for the level-shift distribution.
struct Predictions {
    double mean_shift = 0.0;        ///< shift of the noiseless path R0
    double sigma = 0.0;             ///< broadening with the full bracket
    double sigma_simplified = 0.0;  ///< kT hbar / (eta Rbar^2) * kappa
    double kappa = 0.0;
    double low_noise_margin = 0.0;  ///< kT T / (eta Rbar^2)
    bool low_noise = false;
    double x_c = 0.0;  ///< omega_c M / eta
    double x_b = 0.0;  ///< omega_b M / eta
    double c1 = 0.0;   ///< equals mean_shift
    double c2 = 0.0;   ///< eta kT hbar^2 / (T^2 Rbar^4)
    double c3 = 0.0;   ///< M Rbar^2 / (2 eta^2 kT); infinite at kT = 0
};

struct LowNoiseCheck {
    double margin = 0.0;
    bool ok = false;
};

struct MsdPrediction {
    double value = 0.0;      ///< 2 d (kT/eta) t with d = 2
    double one_dim = 0.0;    ///< 2 (kT/eta) t
};

inline constexpr double kDefaultLowNoiseThreshold = 0.1;

/// int_{x_c}^{x_b} dx / (x^2 (1 + x^2)^2) by adaptive Gauss-Kronrod (relative 1e-10).
/// x_b may be +infinity. Throws DomainError if x_c <= 0 (divergent) or x_b < x_c.
double bandwidth_integral(double x_c, double x_b);

/// sqrt(3 (tau/T) * bandwidth_integral(x_c, x_b) / pi).
double kappa(double x_c, double x_b, double tau_over_T);

double mean_shift(const ModelParams& params);
double sigma_analytic(const ModelParams& params);
double sigma_simplified(const ModelParams& params);
LowNoiseCheck low_noise_check(const ModelParams& params, double threshold = kDefaultLowNoiseThreshold);
MsdPrediction msd_prediction(double t, const ModelParams& params);

Predictions predict(const ModelParams& params, double low_noise_threshold = kDefaultLowNoiseThreshold);

namespace detail {

/// Constants of the low-noise generating function, kept for regression tests of the algebra.
struct GeneratingConstants {
    double c1;
    double c2;
    double c3;
    double e;  ///< -2 eta kT hbar / T
};

GeneratingConstants generating_constants(const ModelParams& params);

struct FrequencyTerms {
    double f1;
    double f3;
    double f4;
};

/// f1, f3, f4 at angular frequency omega given |R0(omega)|^2. f2 is omitted: it only enters
/// odd derivatives and drops out of the mean at rho = 0.
FrequencyTerms frequency_terms(const ModelParams& params, double omega, double r0_abs2);

/// sigma^2 as the two frequency integrals over [omega_c, omega_b] with
/// |R0(omega)|^2 = |R_f - R_i|^2 / (omega^2 (1 + (omega M / eta)^2)).
double variance_from_frequency_integrals(const ModelParams& params);

}  // namespace detail

}  // namespace geolangevin
