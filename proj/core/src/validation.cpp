#include "geolangevin/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geolangevin/analytic.hpp"
#include "geolangevin/berry_phase.hpp"
#include "geolangevin/ensemble.hpp"
#include "geolangevin/langevin.hpp"
#include "geolangevin/path_measure.hpp"
#include "geolangevin/spectral.hpp"

namespace geolangevin {

std::string to_string(CheckStatus status) {
    switch (status) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skipped: return "skipped";
    }
    return "skipped";
}

bool ValidationReport::passed() const {
    for (const CheckResult& c : checks) {
        if (c.status == CheckStatus::fail) return false;
    }
    return true;
}

const CheckResult* ValidationReport::find(const std::string& name) const {
    for (const CheckResult& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

namespace {

CheckResult make(std::string name, double measured, double expected, double tolerance, bool ok,
                 std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.measured = measured;
    c.expected = expected;
    c.tolerance = tolerance;
    c.status = ok ? CheckStatus::pass : CheckStatus::fail;
    c.detail = std::move(detail);
    return c;
}

CheckResult skipped(std::string name, std::string why) {
    CheckResult c;
    c.name = std::move(name);
    c.status = CheckStatus::skipped;
    c.detail = std::move(why);
    return c;
}

/// Copy of the model moved far from the puncture, for checks of the free dynamics.
ModelParams far_copy(const ModelParams& params, double spread) {
    ModelParams p = params;
    const double offset = 1e3 * (norm(params.start) + norm(params.end) + spread + 1.0);
    p.start = {offset, 0.0};
    p.end = {offset, 0.0};
    p.puncture_radius.reset();
    p.noise_band_cap = std::numeric_limits<double>::infinity();
    return p;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

std::string fmt(const char* label, double v) {
    std::ostringstream s;
    s << label << v;
    return s.str();
}

// ---- thermal passes -------------------------------------------------------------------------

constexpr std::size_t kMsdSamples = 64;
constexpr std::size_t kAutocorrLags = 20;

/// Homogeneous start: squared deviation from R0 at sampled grid points and the final velocity.
struct DeviationPass {
    std::vector<std::size_t> index;  // grid indices of the samples
    std::vector<double> mean_sq;     // <|R - R0|^2>
    std::vector<Vec2> final_v;
    std::size_t aborted = 0;
};

DeviationPass deviation_pass(const ModelParams& params, const ValidationBudget& budget) {
    DeviationPass out;
    const std::size_t n = params.steps();
    for (std::size_t j = 1; j <= kMsdSamples; ++j) out.index.push_back(j * n / kMsdSamples);
    const Trajectory r0 = homogeneous_solution(params);

    struct PerPath {
        std::vector<double> sq;
        Vec2 v;
        bool ok = false;
    };
    std::vector<PerPath> paths(budget.n_paths);
    SimulationOptions sim;
    sim.initial_velocity = InitialVelocity::homogeneous;
    parallel_for(budget.n_paths, resolve_threads(budget.threads), [&](std::size_t i) {
        RandomStream rng = RandomStream::substream(budget.seed ^ 0x5a17c0deULL, i);
        try {
            const Trajectory traj = simulate(params, sim, rng);
            PerPath& p = paths[i];
            for (std::size_t k : out.index) p.sq.push_back(norm2(traj.states[k].r - r0.states[k].r));
            p.v = traj.states.back().v;
            p.ok = true;
        } catch (const PathAborted&) {
        }
    });
    out.mean_sq.assign(out.index.size(), 0.0);
    std::size_t used = 0;
    for (const PerPath& p : paths) {
        if (!p.ok) {
            ++out.aborted;
            continue;
        }
        for (std::size_t j = 0; j < p.sq.size(); ++j) out.mean_sq[j] += p.sq[j];
        out.final_v.push_back(p.v);
        ++used;
    }
    for (double& m : out.mean_sq) m /= static_cast<double>(std::max<std::size_t>(used, 1));
    return out;
}

CheckResult equipartition_from(const ModelParams& params, const DeviationPass& pass) {
    const std::size_t m = 2 * pass.final_v.size();
    if (m < 4) return skipped("equipartition", "not enough surviving paths");
    double s = 0.0, ss = 0.0;
    for (const Vec2& v : pass.final_v) {
        s += v.x + v.y;
        ss += v.x * v.x + v.y * v.y;
    }
    const double md = static_cast<double>(m);
    const double var = (ss - s * s / md) / (md - 1.0);
    const double expected = params.kT / params.mass;
    const double se = expected * std::sqrt(2.0 / (md - 1.0));
    return make("equipartition", var, expected, 3.0 * se, std::abs(var - expected) <= 3.0 * se,
                "per-component variance of final velocities, homogeneous start");
}

CheckResult msd_from(const ModelParams& params, const DeviationPass& pass) {
    const double tau = params.relaxation_time();
    std::vector<double> t, y;
    for (std::size_t j = 0; j < pass.index.size(); ++j) {
        const double s = static_cast<double>(pass.index[j]) * params.dt;
        if (s > 5.0 * tau) {
            t.push_back(s);
            y.push_back(pass.mean_sq[j]);
        }
    }
    if (t.size() < 3) return skipped("msd", "fewer than 3 samples beyond 5 M/eta");
    const double slope = least_squares(t, y).slope;
    const double expected = 4.0 * params.kT / params.friction;
    const double rel = slope / expected - 1.0;
    return make("msd", slope, expected, 0.05, std::abs(rel) <= 0.05,
                fmt("relative deviation ", rel));
}

CheckResult autocorrelation_impl(const ModelParams& params, const ValidationBudget& budget) {
    const double tau = params.relaxation_time();
    const std::size_t n = params.steps();
    const std::size_t span = static_cast<std::size_t>(std::llround(2.0 * tau / params.dt));
    if (span < kAutocorrLags || span * 2 > n) {
        return skipped("velocity_autocorrelation", "needs duration >= 4 M/eta and 2 M/eta >= 20 dt");
    }
    std::vector<std::size_t> lags;
    for (std::size_t j = 0; j <= kAutocorrLags; ++j) lags.push_back(j * span / kAutocorrLags);

    std::vector<std::array<double, kAutocorrLags + 1>> sums(budget.n_paths);
    std::vector<char> ok(budget.n_paths, 0);
    SimulationOptions sim;
    sim.initial_velocity = InitialVelocity::maxwell;
    const ModelParams p = far_copy(params, std::sqrt(4.0 * params.kT * params.duration / params.friction));
    parallel_for(budget.n_paths, resolve_threads(budget.threads), [&](std::size_t i) {
        RandomStream rng = RandomStream::substream(budget.seed ^ 0xac0ffeeULL, i);
        try {
            const Trajectory traj = simulate(p, sim, rng);
            for (std::size_t j = 0; j < lags.size(); ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k + lags[j] <= n; ++k) {
                    acc += dot(traj.states[k].v, traj.states[k + lags[j]].v);
                }
                sums[i][j] = acc / static_cast<double>(n + 1 - lags[j]);
            }
            ok[i] = 1;
        } catch (const PathAborted&) {
        }
    });
    std::vector<double> s, logc;
    double c0 = 0.0;
    for (std::size_t j = 0; j < lags.size(); ++j) {
        double acc = 0.0;
        std::size_t used = 0;
        for (std::size_t i = 0; i < budget.n_paths; ++i) {
            if (!ok[i]) continue;
            acc += sums[i][j];
            ++used;
        }
        const double c = acc / static_cast<double>(std::max<std::size_t>(used, 1));
        if (j == 0) c0 = c;
        if (!(c > 0.0)) break;
        s.push_back(static_cast<double>(lags[j]) * params.dt);
        logc.push_back(std::log(c));
    }
    if (s.size() < 3) return make("velocity_autocorrelation", 0.0, params.damping_rate(), 0.02, false,
                                  "autocorrelation became non-positive");
    const double rate = -least_squares(s, logc).slope;
    const double rel = rate / params.damping_rate() - 1.0;
    std::ostringstream d;
    d << "fitted decay rate over [0, 2 M/eta]; C(0) = " << c0 << " (expected " << 2.0 * params.kT / params.mass
      << ")";
    return make("velocity_autocorrelation", rate, params.damping_rate(), 0.02, std::abs(rel) <= 0.02, d.str());
}

// ---- ensemble of level shifts ---------------------------------------------------------------

ShiftEnsemble shift_ensemble(const ModelParams& params, const ValidationBudget& budget) {
    EnsembleOptions opts;
    opts.n_paths = budget.n_paths;
    opts.seed = budget.seed;
    opts.simulation.initial_velocity = InitialVelocity::homogeneous;
    opts.conditioning = Conditioning::free;
    opts.threads = budget.threads;
    return run_ensemble(params, opts);
}

CheckResult mean_shift_from(const ModelParams& params, const ShiftEnsemble& e) {
    const double expected = mean_shift(params);
    const double diff = e.mean - expected;
    if (params.kT == 0.0) {
        const double tol = 1e-9 * std::abs(expected) + 1e-300;
        return make("mean_shift", e.mean, expected, tol, std::abs(diff) <= tol, "noiseless ensemble");
    }
    const double tol = 3.0 * e.std_err_mean;
    return make("mean_shift", e.mean, expected, tol, std::abs(diff) <= tol,
                fmt("deviation in standard errors ", diff / e.std_err_mean));
}

CheckResult sigma_from(const ModelParams& params, const ShiftEnsemble& e) {
    const double expected = sigma_analytic(params);
    const double sd = std::sqrt(e.variance);
    const double ratio = sd / expected;
    return make("sigma", sd, expected, 3.0, ratio >= 1.0 / 3.0 && ratio <= 3.0, fmt("ratio ", ratio));
}

// ---- path measure ---------------------------------------------------------------------------

/// Pairs compared by the transition-ratio check. The action and the exact step density differ
/// by a factor 1 + O(eta dt / M), so the ratio error grows like (eta dt / M) |dS|.
constexpr double kMaxActionGap = 1.5;

/// 1D free-particle model used by the path-measure checks.
struct FreeLine {
    ModelParams params;  // dt eta / M = 0.01, far from the puncture
    double decay = 0.0;  // e^{-eta dt / M}
    double drift = 0.0;  // exact free-flight length per unit velocity
    double step_sd = 0.0;  // std dev of the velocity update
};

FreeLine free_line(const ModelParams& params) {
    FreeLine f;
    f.params = params;
    f.params.dt = 0.01 * params.relaxation_time();
    const double sv = std::sqrt(params.kT / params.mass);
    f.params = far_copy(f.params, sv * f.params.dt);
    f.params.duration = 4.0 * f.params.dt;
    const double g = params.damping_rate();
    f.decay = std::exp(-g * f.params.dt);
    f.drift = std::expm1(g * f.params.dt) / g;
    f.step_sd = sv * std::sqrt(-std::expm1(-2.0 * g * f.params.dt));
    return f;
}

/// Positions x_{-1}, x_0, ..., x_steps with x_{-1} = x_0 - drift v_0 encoding the initial velocity.
Trajectory sample_line(const FreeLine& f, double v0, std::size_t steps, RandomStream& rng) {
    Trajectory traj;
    traj.params = f.params;
    PhaseState s;
    s.r = f.params.start;
    s.v = {v0, 0.0};
    PhaseState before = s;
    before.r.x -= f.drift * v0;
    traj.states.push_back(before);
    traj.states.push_back(s);
    for (std::size_t k = 0; k < steps; ++k) {
        s = step(s, f.params, ForceMode::simplified, rng).state;
        s.r.y = f.params.start.y;
        s.v.y = 0.0;
        traj.states.push_back(s);
    }
    return traj;
}

/// Exact log density of the integrator's increments, from positions only (up to a constant).
double exact_log_density(const FreeLine& f, const Trajectory& traj) {
    double lp = 0.0;
    for (std::size_t k = 1; k + 1 < traj.states.size(); ++k) {
        const double v_prev = (traj.states[k].r.x - traj.states[k - 1].r.x) / f.drift;
        const double v_next = (traj.states[k + 1].r.x - traj.states[k].r.x) / f.drift;
        const double z = (v_next - f.decay * v_prev) / f.step_sd;
        lp -= 0.5 * z * z;
    }
    return lp;
}

double scaled_action(const FreeLine& f, const Trajectory& traj, double friction_scale) {
    ModelParams p = f.params;
    p.friction *= friction_scale;
    return om_action(traj, p, ForceMode::simplified, ActionStencil::interior).action;
}

}  // namespace

// ---- public checks ----------------------------------------------------------------------------

CheckResult check_noise_calibration(const ModelParams& params, const ValidationBudget& budget) {
    const char* name = "noise_calibration";
    if (params.kT == 0.0) return skipped(name, "kT = 0");
    if (budget.noise_steps < 100) return skipped(name, "noise_steps < 100");
    const double spread = std::sqrt(4.0 * params.kT * params.dt * static_cast<double>(budget.noise_steps) /
                                    params.friction);
    const ModelParams p = far_copy(params, spread);
    RandomStream rng = RandomStream::substream(budget.seed, 0x9015eULL);
    PhaseState s;
    s.r = p.start;
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < budget.noise_steps; ++k) {
        const StepResult r = step(s, p, ForceMode::simplified, rng);
        s = r.state;
        sx += r.noise.x;
        sy += r.noise.y;
        sxx += r.noise.x * r.noise.x;
        syy += r.noise.y * r.noise.y;
        sxy += r.noise.x * r.noise.y;
    }
    const double n = static_cast<double>(budget.noise_steps);
    const double vx = (sxx - sx * sx / n) / (n - 1.0);
    const double vy = (syy - sy * sy / n) / (n - 1.0);
    const double cxy = (sxy - sx * sy / n) / (n - 1.0);
    const double expected = 2.0 * params.friction * params.kT / params.dt;
    const double rel = std::max(std::abs(vx / expected - 1.0), std::abs(vy / expected - 1.0));
    const double z_cross = cxy / expected * std::sqrt(n);
    const bool ok = rel <= 0.01 && std::abs(z_cross) <= 3.0;
    std::ostringstream d;
    d << "var_x/expected = " << vx / expected << ", var_y/expected = " << vy / expected
      << ", cross z = " << z_cross;
    return make(name, 0.5 * (vx + vy), expected, 0.01, ok, d.str());
}

CheckResult check_equipartition(const ModelParams& params, const ValidationBudget& budget) {
    if (params.kT == 0.0) return skipped("equipartition", "kT = 0");
    if (params.duration < 5.0 * params.relaxation_time()) return skipped("equipartition", "duration < 5 M/eta");
    return equipartition_from(params, deviation_pass(params, budget));
}

CheckResult check_velocity_autocorrelation(const ModelParams& params, const ValidationBudget& budget) {
    if (params.kT == 0.0) return skipped("velocity_autocorrelation", "kT = 0");
    return autocorrelation_impl(params, budget);
}

CheckResult check_msd(const ModelParams& params, const ValidationBudget& budget) {
    if (params.kT == 0.0) return skipped("msd", "kT = 0");
    return msd_from(params, deviation_pass(params, budget));
}

SpectrumChecks check_spectrum(const ModelParams& params, const ValidationBudget& budget) {
    SpectrumChecks out;
    if (params.kT == 0.0 || budget.spectrum_paths == 0) {
        out.band = skipped("spectrum_band", "kT = 0 or no paths");
        out.slope = skipped("spectrum_slope", "kT = 0 or no paths");
        out.energy = skipped("spectrum_energy", "kT = 0 or no paths");
        return out;
    }
    const double tau = params.relaxation_time();
    ModelParams p = params;
    p.dt = std::min(params.dt, 1e-3 * tau);
    p.duration = std::round(100.0 * tau / p.dt) * p.dt;
    p = far_copy(p, std::sqrt(4.0 * p.kT * p.duration / p.friction));

    SimulationOptions sim;
    sim.initial_velocity = InitialVelocity::maxwell;
    std::vector<Spectrum> spectra(budget.spectrum_paths);
    std::vector<double> kinetic(budget.spectrum_paths, 0.0);
    parallel_for(budget.spectrum_paths, resolve_threads(budget.threads), [&](std::size_t i) {
        RandomStream rng = RandomStream::substream(budget.seed ^ 0x5bec7aULL, i);
        const Trajectory traj = simulate(p, sim, rng);
        spectra[i] = periodogram(traj, SignalKind::position, 1);
        double ke = 0.0;
        for (const PhaseState& s : traj.states) ke += norm2(s.v);
        kinetic[i] = 0.5 * p.mass * ke / static_cast<double>(traj.states.size());
    });
    const Spectrum mean = average(spectra);

    // Band comparison on log-spaced sub-bands of [3 omega_c, 0.1 / dt].
    const double lo = 3.0 * p.omega_c();
    const double hi = 0.1 / p.dt;
    constexpr int kBands = 8;
    double worst = 0.0;
    std::ostringstream d;
    d << "sub-band ratios:";
    for (int b = 0; b < kBands; ++b) {
        const double a = lo * std::pow(hi / lo, static_cast<double>(b) / kBands);
        const double z = lo * std::pow(hi / lo, static_cast<double>(b + 1) / kBands);
        double mc = 0.0, th = 0.0;
        for (std::size_t j = 0; j < mean.omega.size(); ++j) {
            const double w = mean.omega[j];
            if (w < a || w >= z) continue;
            mc += mean.density[j];
            th += transfer_JR(w, p);
        }
        if (th <= 0.0) continue;
        const double ratio = mc / th;
        worst = std::max(worst, std::abs(ratio - 1.0));
        d << ' ' << ratio;
    }
    out.band = make("spectrum_band", worst, 0.0, 0.1, worst <= 0.1, d.str());

    std::vector<double> lw, lj;
    for (std::size_t j = 0; j < mean.omega.size(); ++j) {
        const double w = mean.omega[j];
        if (w < 10.0 * p.damping_rate() || w > hi) continue;
        lw.push_back(std::log(w));
        lj.push_back(std::log(mean.density[j]));
    }
    if (lw.size() < 3) {
        out.slope = skipped("spectrum_slope", "no frequencies above 10 eta/M below 0.1/dt");
    } else {
        const double slope = least_squares(lw, lj).slope;
        out.slope = make("spectrum_slope", slope, -4.0, 0.05, std::abs(slope + 4.0) <= 0.05,
                         fmt("frequencies used: ", static_cast<double>(lw.size())));
    }

    double ke = 0.0;
    for (double k : kinetic) ke += k;
    ke /= static_cast<double>(kinetic.size());
    const double inf = std::numeric_limits<double>::infinity();
    const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double w) { return energy_spectral_density(w, p, inf); }, 0.0, inf, 15, 1e-12);
    const double from_spectrum = 2.0 * integral / std::numbers::pi;  // two components
    const double rel = ke / from_spectrum - 1.0;
    out.energy = make("spectrum_energy", ke, from_spectrum, 0.05, std::abs(rel) <= 0.05,
                      "mean kinetic energy vs (1/pi) int J_E d omega summed over components");
    return out;
}

CheckResult check_om_transition_ratio(const ModelParams& params, const ValidationBudget& budget) {
    const char* name = "om_transition_ratio";
    if (params.kT == 0.0) return skipped(name, "kT = 0");
    const FreeLine f = free_line(params);
    RandomStream rng = RandomStream::substream(budget.seed, 0x0a3ULL);
    const double sv = std::sqrt(params.kT / params.mass);
    double worst = 0.0;
    std::size_t used = 0;
    for (std::size_t attempt = 0; used < budget.om_pairs && attempt < 100 * budget.om_pairs + 100; ++attempt) {
        const double v0 = sv * rng.normal();
        const Trajectory a = sample_line(f, v0, 3, rng);
        const Trajectory b = sample_line(f, v0, 3, rng);
        const double exact = exact_log_density(f, a) - exact_log_density(f, b);
        if (std::abs(exact) >= kMaxActionGap) continue;
        const double om = -(scaled_action(f, a, budget.action_friction_scale) -
                            scaled_action(f, b, budget.action_friction_scale));
        worst = std::max(worst, std::abs(std::expm1(om - exact)));
        ++used;
    }
    if (used == 0) return skipped(name, "no path pairs drawn");
    return make(name, worst, 0.0, 0.02, worst <= 0.02,
                fmt("largest relative error of exp(-dS) over pairs: n = ", static_cast<double>(used)));
}

CheckResult check_om_histogram(const ModelParams& params, const ValidationBudget& budget) {
    const char* name = "om_histogram";
    if (params.kT == 0.0) return skipped(name, "kT = 0");
    if (budget.om_samples == 0) return skipped(name, "om_samples = 0");
    constexpr std::size_t kSteps = 4;
    constexpr std::size_t kCells = 20;
    constexpr double kSide = 0.3;  // cell side in units of the per-step noise scale
    const FreeLine f = free_line(params);
    const double unit = f.drift * f.step_sd;  // spread of one second difference

    // Cells are boxes in second-difference coordinates u_k = x_k - 2 x_{k-1} + x_{k-2}, a
    // volume-preserving linear image of path space. Centers sit at standardized noise vectors.
    std::vector<std::array<double, kSteps>> xi_centers;
    xi_centers.push_back({0, 0, 0, 0});
    for (double r : {1.0, -1.0, 2.0, -2.0}) {
        for (std::size_t k = 0; k < kSteps; ++k) {
            std::array<double, kSteps> c{};
            c[k] = r;
            xi_centers.push_back(c);
        }
    }
    xi_centers.push_back({1.06, 1.06, 0, 0});
    xi_centers.push_back({0, 0, 1.06, 1.06});
    xi_centers.push_back({0.75, -0.75, 0.75, -0.75});

    const double x0 = f.params.start.x;
    std::vector<std::array<double, kSteps>> u_centers;
    std::vector<double> weights;
    for (const auto& xi : xi_centers) {
        Trajectory path;
        path.params = f.params;
        PhaseState s;
        s.r = f.params.start;
        PhaseState before = s;
        path.states.push_back(before);
        path.states.push_back(s);
        double v = 0.0;
        double x = x0;
        for (std::size_t k = 0; k < kSteps; ++k) {
            v = f.decay * v + f.step_sd * xi[k];
            x += f.drift * v;
            s.r.x = x;
            path.states.push_back(s);
        }
        std::array<double, kSteps> u{};
        for (std::size_t k = 0; k < kSteps; ++k) {
            u[k] = path.states[k + 2].r.x - 2.0 * path.states[k + 1].r.x + path.states[k].r.x;
        }
        u_centers.push_back(u);
        weights.push_back(-scaled_action(f, path, budget.action_friction_scale));
    }
    const double wmax = *std::max_element(weights.begin(), weights.end());
    double wsum = 0.0;
    for (double& w : weights) {
        w = std::exp(w - wmax);
        wsum += w;
    }

    const double half = 0.5 * kSide * unit;
    std::vector<std::size_t> counts(kCells, 0);
    RandomStream rng = RandomStream::substream(budget.seed, 0x415ULL);
    for (std::size_t n = 0; n < budget.om_samples; ++n) {
        PhaseState s;
        s.r = f.params.start;
        double prev2 = x0, prev1 = x0;
        std::array<double, kSteps> u{};
        for (std::size_t k = 0; k < kSteps; ++k) {
            s = step(s, f.params, ForceMode::simplified, rng).state;
            s.r.y = f.params.start.y;
            s.v.y = 0.0;
            u[k] = s.r.x - 2.0 * prev1 + prev2;
            prev2 = prev1;
            prev1 = s.r.x;
        }
        for (std::size_t c = 0; c < kCells; ++c) {
            bool inside = true;
            for (std::size_t k = 0; k < kSteps && inside; ++k) inside = std::abs(u[k] - u_centers[c][k]) <= half;
            if (inside) {
                ++counts[c];
                break;
            }
        }
    }
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    if (total == 0) return make(name, 0.0, 0.01, 0.01, false, "no samples fell into the lattice cells");
    double chi2 = 0.0;
    for (std::size_t c = 0; c < kCells; ++c) {
        const double e = static_cast<double>(total) * weights[c] / wsum;
        const double d = static_cast<double>(counts[c]) - e;
        chi2 += d * d / e;
    }
    const boost::math::chi_squared_distribution<double> dist(static_cast<double>(kCells - 1));
    const double p = boost::math::cdf(boost::math::complement(dist, chi2));
    std::ostringstream d;
    d << "chi2 = " << chi2 << " with " << kCells - 1 << " dof, " << total << " samples in cells";
    return make(name, p, 0.01, 0.01, p > 0.01, d.str());
}

CheckResult check_phase_quantization(const ModelParams& params) {
    const double radius = params.mean_radius() > 0.0 ? params.mean_radius() : 1.0;
    constexpr int kPerTurn = 1000;
    double worst = 0.0;
    bool windings_ok = true;
    for (int n : {-2, -1, 1, 2, 3}) {
        Trajectory loop;
        loop.params = params;
        const int total = kPerTurn * std::abs(n);
        for (int k = 0; k <= total; ++k) {
            const double th = 2.0 * std::numbers::pi * n * static_cast<double>(k) / total;
            PhaseState s;
            s.r = {radius * std::cos(th), radius * std::sin(th)};
            loop.states.push_back(s);
        }
        loop.states.back().r = loop.states.front().r;
        const PhaseResult r = accumulate_phase(loop);
        worst = std::max(worst, std::abs(r.gamma + std::numbers::pi * n));
        windings_ok = windings_ok && r.closed && r.winding && *r.winding == n;
    }
    return make("phase_quantization", worst, 0.0, 1e-9, worst <= 1e-9 && windings_ok,
                windings_ok ? "windings -2..3 recovered" : "winding number mismatch");
}

CheckResult check_line_integral_order(const ModelParams& params) {
    const double rho = params.mean_radius() > 0.0 ? params.mean_radius() : 1.0;
    const Vec2 center{0.3 * rho, 0.1 * rho};
    auto loop = [&](int n) {
        Trajectory t;
        t.params = params;
        for (int k = 0; k <= n; ++k) {
            const double th = 2.0 * std::numbers::pi * k / n;
            PhaseState s;
            s.r = center + Vec2{1.2 * rho * std::cos(th), 0.8 * rho * std::sin(th)};
            t.states.push_back(s);
        }
        t.states.back().r = t.states.front().r;
        return t;
    };
    std::vector<double> errors;
    for (int n : {100, 200, 400, 800}) {
        const Trajectory t = loop(n);
        errors.push_back(std::abs(connection_line_integral(t) - accumulate_phase(t).gamma));
    }
    double order = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) order = std::min(order, std::log2(errors[i] / errors[i + 1]));
    return make("line_integral_order", order, 2.0, 1.9, order >= 1.9,
                fmt("error at 800 points: ", errors.back()));
}

CheckResult check_mean_shift(const ModelParams& params, const ValidationBudget& budget) {
    if (low_noise_check(params).margin >= 0.02) return skipped("mean_shift", "low-noise margin >= 0.02");
    return mean_shift_from(params, shift_ensemble(params, budget));
}

CheckResult check_sigma(const ModelParams& params, const ValidationBudget& budget) {
    if (params.kT == 0.0) return skipped("sigma", "kT = 0");
    if (!low_noise_check(params, budget.low_noise_threshold).ok) return skipped("sigma", "not low-noise");
    return sigma_from(params, shift_ensemble(params, budget));
}

CheckResult check_adiabaticity(const ModelParams& params, const ValidationBudget& budget) {
    const AdiabaticityReport r = adiabaticity_check(params, budget.adiabatic_threshold);
    return make("adiabaticity", r.ratio, 0.0, budget.adiabatic_threshold, r.ok,
                "hbar / (tau_c * level spacing)");
}

CheckResult check_low_noise(const ModelParams& params, const ValidationBudget& budget) {
    const LowNoiseCheck r = low_noise_check(params, budget.low_noise_threshold);
    return make("low_noise", r.margin, 0.0, budget.low_noise_threshold, r.ok, "kT T / (eta Rbar^2)");
}

ValidationReport validate(const ModelParams& params, const ValidationBudget& budget) {
    params.validate();
    ValidationReport report;
    auto add = [&](CheckResult c) { report.checks.push_back(std::move(c)); };

    add(check_noise_calibration(params, budget));
    if (params.kT == 0.0) {
        add(skipped("equipartition", "kT = 0"));
        add(skipped("msd", "kT = 0"));
    } else if (params.duration < 5.0 * params.relaxation_time()) {
        add(skipped("equipartition", "duration < 5 M/eta"));
        add(skipped("msd", "duration < 5 M/eta"));
    } else {
        const DeviationPass pass = deviation_pass(params, budget);
        add(equipartition_from(params, pass));
        add(msd_from(params, pass));
    }
    add(check_velocity_autocorrelation(params, budget));
    SpectrumChecks spectrum = check_spectrum(params, budget);
    add(std::move(spectrum.band));
    add(std::move(spectrum.slope));
    add(std::move(spectrum.energy));
    add(check_om_transition_ratio(params, budget));
    add(check_om_histogram(params, budget));
    add(check_phase_quantization(params));
    add(check_line_integral_order(params));

    const LowNoiseCheck ln = low_noise_check(params, budget.low_noise_threshold);
    std::optional<ShiftEnsemble> ensemble;
    if (ln.margin < 0.02 || (ln.ok && params.kT > 0.0)) ensemble = shift_ensemble(params, budget);
    if (ln.margin < 0.02) {
        add(mean_shift_from(params, *ensemble));
    } else {
        add(skipped("mean_shift", "low-noise margin >= 0.02"));
    }
    if (params.kT == 0.0) {
        add(skipped("sigma", "kT = 0"));
    } else if (!ln.ok) {
        add(skipped("sigma", "not low-noise"));
    } else {
        add(sigma_from(params, *ensemble));
    }
    add(check_adiabaticity(params, budget));
    add(check_low_noise(params, budget));
    return report;
}

}  // namespace geolangevin
