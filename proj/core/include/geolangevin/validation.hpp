#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "geolangevin/params.hpp"

namespace geolangevin {

enum class CheckStatus { pass, fail, skipped };

std::string to_string(CheckStatus status);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::skipped;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool passed() const;  ///< no check failed (skips are fine)
    const CheckResult* find(const std::string& name) const;
};

/// Sample sizes for the battery. The defaults finish in well under five minutes on one core
/// for the default model.
struct ValidationBudget {
    std::uint64_t seed = 42;
    std::size_t n_paths = 10000;
    std::size_t noise_steps = 1000000;
    std::size_t spectrum_paths = 800;
    std::size_t om_samples = 4000000;
    std::size_t om_pairs = 40;
    unsigned threads = 0;
    double low_noise_threshold = 0.1;
    double adiabatic_threshold = 0.1;
    /// Friction used inside the path action relative to the dynamics; != 1 injects a fault.
    double action_friction_scale = 1.0;

    bool operator==(const ValidationBudget&) const = default;
};

// Individual checks. Each one documents the regime it runs in; checks that need thermal
// noise are skipped at kT = 0.

/// Covariance of 2D force samples vs 2 eta kT / dt (1%), cross term within 3 standard errors.
CheckResult check_noise_calibration(const ModelParams& params, const ValidationBudget& budget);
/// Stationary per-component velocity variance vs kT/M within 3 standard errors.
CheckResult check_equipartition(const ModelParams& params, const ValidationBudget& budget);
/// Decay rate of <v(0).v(s)> over s in [0, 2 M/eta] vs eta/M within 2%.
CheckResult check_velocity_autocorrelation(const ModelParams& params, const ValidationBudget& budget);
/// Late-time slope of <|R - R0|^2> vs 4 kT/eta within 5%.
CheckResult check_msd(const ModelParams& params, const ValidationBudget& budget);

struct SpectrumChecks {
    CheckResult band;    ///< sub-band ratios of the position estimate to J_R within 10%
    CheckResult slope;   ///< log-log slope above 10 omega_r: -4 +- 0.05
    CheckResult energy;  ///< (M/2)(1/pi) int J_v d omega vs MC kinetic energy within 5%
};
/// Runs on a copy of the model with duration 100 M/eta and dt = min(dt, 1e-3 M/eta).
SpectrumChecks check_spectrum(const ModelParams& params, const ValidationBudget& budget);

/// Weight ratios exp(-dS) of the interior-stencil action vs the integrator's exact Gaussian
/// step density on 3-step 1D paths at dt eta / M = 0.01, for pairs with |dS| < 1.5; 2% tolerance.
CheckResult check_om_transition_ratio(const ModelParams& params, const ValidationBudget& budget);
/// Chi-square test (p > 0.01) that 4-step 1D sampler paths populate 20 lattice cells in
/// proportion to exp(-S).
CheckResult check_om_histogram(const ModelParams& params, const ValidationBudget& budget);

/// Closed circles of winding -2..3 give gamma = -pi n to 1e-9.
CheckResult check_phase_quantization(const ModelParams& params);
/// A.dR line integral converges to the unwrapped phase at order >= 1.9.
CheckResult check_line_integral_order(const ModelParams& params);

/// Ensemble mean shift vs the shift of R0 within 3 standard errors (margin < 0.02 only).
CheckResult check_mean_shift(const ModelParams& params, const ValidationBudget& budget);
/// Ensemble standard deviation vs sigma_analytic within a factor 3 (low-noise only).
CheckResult check_sigma(const ModelParams& params, const ValidationBudget& budget);

CheckResult check_adiabaticity(const ModelParams& params, const ValidationBudget& budget);
CheckResult check_low_noise(const ModelParams& params, const ValidationBudget& budget);

/// Full battery in a fixed order.
ValidationReport validate(const ModelParams& params, const ValidationBudget& budget);

}  // namespace geolangevin
