#include "geolangevin/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <ostream>

#include <fftw3.h>

#include "geolangevin/errors.hpp"

namespace geolangevin {

std::string to_string(SignalKind kind) {
    switch (kind) {
        case SignalKind::position: return "position";
        case SignalKind::velocity: return "velocity";
        case SignalKind::force: return "force";
        case SignalKind::energy: return "energy";
    }
    return "position";
}

SignalKind signal_kind_from_string(const std::string& text) {
    if (text == "position") return SignalKind::position;
    if (text == "velocity") return SignalKind::velocity;
    if (text == "force") return SignalKind::force;
    if (text == "energy") return SignalKind::energy;
    throw ConfigError("unknown signal '" + text + "' (expected position|velocity|force|energy)");
}

double Spectrum::mean_square() const {
    double total = 0.0;
    for (std::size_t j = 0; j < omega.size(); ++j) {
        const double lo = j == 0 ? 0.0 : omega[j - 1];
        total += density[j] * (omega[j] - lo);
    }
    return total / std::numbers::pi;
}

namespace {

// FFTW's planner is not re-entrant; execution of an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class FftwBuffer {
public:
    explicit FftwBuffer(std::size_t n) : data_(static_cast<double*>(fftw_malloc(sizeof(double) * n))) {
        if (data_ == nullptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data_); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    double* get() const noexcept { return data_; }

private:
    double* data_;
};

class FftwPlan {
public:
    explicit FftwPlan(fftw_plan plan) : plan_(plan) {
        if (plan_ == nullptr) throw NumericalError("FFTW failed to create a plan");
    }
    ~FftwPlan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

}  // namespace

Spectrum welch_density(std::span<const double> samples, double dt, int segments) {
    if (segments < 1) throw DomainError("welch: segment count must be >= 1");
    const std::size_t n = samples.size();
    const auto k = static_cast<std::size_t>(segments);
    const std::size_t len = k == 1 ? n : (2 * n) / (k + 1);
    if (n < 2 * k || len < 8) throw DomainError("welch: too few samples for the requested segment count");
    const std::size_t hop = k == 1 ? 0 : len / 2;

    std::vector<double> window(len);
    double wsum2 = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(len));
        wsum2 += window[i] * window[i];
    }

    const std::size_t bins = len / 2;
    FftwBuffer in(len);
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (bins + 1)));
    if (out == nullptr) throw std::bad_alloc();
    std::unique_ptr<fftw_complex, decltype(&fftw_free)> out_guard(out, fftw_free);
    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_dft_r2c_1d(static_cast<int>(len), in.get(), out, FFTW_ESTIMATE);
    }
    FftwPlan plan(raw);

    Spectrum s;
    s.omega.resize(bins);
    s.density.assign(bins, 0.0);
    const double dw = 2.0 * std::numbers::pi / (static_cast<double>(len) * dt);
    for (std::size_t j = 0; j < bins; ++j) s.omega[j] = dw * static_cast<double>(j + 1);

    for (std::size_t seg = 0; seg < k; ++seg) {
        const std::size_t off = seg * hop;
        double mean = 0.0;
        for (std::size_t i = 0; i < len; ++i) mean += samples[off + i];
        mean /= static_cast<double>(len);
        for (std::size_t i = 0; i < len; ++i) in.get()[i] = window[i] * (samples[off + i] - mean);
        plan.execute();
        for (std::size_t j = 1; j <= bins; ++j) {
            const double p = out[j][0] * out[j][0] + out[j][1] * out[j][1];
            const bool nyquist = (len % 2 == 0) && j == bins;
            s.density[j - 1] += (nyquist ? 0.5 : 1.0) * dt * p / wsum2;
        }
    }
    for (double& d : s.density) d /= static_cast<double>(k);
    return s;
}

Spectrum sine_density(std::span<const double> samples, double dt) {
    const std::size_t len = samples.size();
    if (len < 4) throw DomainError("sine spectrum: block needs at least 4 samples");
    const std::size_t m = len - 2;
    const double block = static_cast<double>(len - 1) * dt;

    FftwBuffer in(m);
    FftwBuffer out(m);
    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_r2r_1d(static_cast<int>(m), in.get(), out.get(), FFTW_RODFT00, FFTW_ESTIMATE);
    }
    FftwPlan plan(raw);

    const double first = samples.front();
    const double slope = (samples.back() - first) / static_cast<double>(len - 1);
    for (std::size_t j = 0; j < m; ++j) {
        in.get()[j] = samples[j + 1] - (first + slope * static_cast<double>(j + 1));
    }
    plan.execute();

    Spectrum s;
    s.omega.resize(m);
    s.density.resize(m);
    for (std::size_t n = 0; n < m; ++n) {
        s.omega[n] = std::numbers::pi * static_cast<double>(n + 1) / block;
        const double o = out.get()[n];
        s.density[n] = dt * dt * o * o / (2.0 * block);
    }
    return s;
}

Spectrum average(std::span<const Spectrum> spectra) {
    if (spectra.empty()) throw DomainError("average of zero spectra");
    Spectrum out = spectra.front();
    for (std::size_t i = 1; i < spectra.size(); ++i) {
        if (spectra[i].density.size() != out.density.size()) throw DomainError("average: spectra grids differ");
        for (std::size_t j = 0; j < out.density.size(); ++j) out.density[j] += spectra[i].density[j];
    }
    for (double& d : out.density) d /= static_cast<double>(spectra.size());
    return out;
}

namespace {

Spectrum position_spectrum(const Trajectory& traj, int segments) {
    const std::size_t n = traj.states.size();
    if (segments < 1) throw DomainError("periodogram: segment count must be >= 1");
    const auto k = static_cast<std::size_t>(segments);
    if (n < 2 * k || (n - 1) / k < 3) throw DomainError("periodogram: too few samples for the requested segment count");
    const std::size_t block = (n - 1) / k;
    std::vector<Spectrum> parts;
    parts.reserve(2 * k);
    std::vector<double> xs(block + 1);
    std::vector<double> ys(block + 1);
    for (std::size_t seg = 0; seg < k; ++seg) {
        for (std::size_t i = 0; i <= block; ++i) {
            xs[i] = traj.states[seg * block + i].r.x;
            ys[i] = traj.states[seg * block + i].r.y;
        }
        parts.push_back(sine_density(xs, traj.params.dt));
        parts.push_back(sine_density(ys, traj.params.dt));
    }
    return average(parts);
}

template <class Get>
Spectrum component_welch(std::size_t n, Get get, double dt, int segments) {
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 v = get(i);
        xs[i] = v.x;
        ys[i] = v.y;
    }
    const Spectrum parts[] = {welch_density(xs, dt, segments), welch_density(ys, dt, segments)};
    return average(parts);
}

}  // namespace

Spectrum periodogram(const Trajectory& traj, SignalKind signal, int segments) {
    const double dt = traj.params.dt;
    Spectrum s;
    switch (signal) {
        case SignalKind::position:
            s = position_spectrum(traj, segments);
            break;
        case SignalKind::velocity:
        case SignalKind::energy:
            s = component_welch(traj.states.size(), [&](std::size_t i) { return traj.states[i].v; }, dt, segments);
            if (signal == SignalKind::energy) {
                for (double& d : s.density) d *= 0.5 * traj.params.mass;
            }
            break;
        case SignalKind::force:
            if (traj.noise.empty()) throw DomainError("periodogram: trajectory carries no force record");
            s = component_welch(traj.noise.size(), [&](std::size_t i) { return traj.noise[i]; }, dt, segments);
            break;
    }
    s.kind = signal;
    return s;
}

double transfer_JR(double omega, const ModelParams& params) {
    if (!(omega > 0.0)) throw DomainError("J_R diverges at omega = 0");
    const double wr = params.damping_rate();
    const double m = params.mass;
    return 2.0 * params.friction * params.kT / (m * m * omega * omega * (omega * omega + wr * wr));
}

double transfer_Jv(double omega, const ModelParams& params) {
    const double wr = params.damping_rate();
    const double m = params.mass;
    return 2.0 * params.friction * params.kT / (m * m * (omega * omega + wr * wr));
}

double energy_spectral_density(double omega, const ModelParams& params, double cutoff) {
    if (omega > cutoff) return 0.0;
    const double wr = params.damping_rate();
    return params.friction * params.kT / (params.mass * (omega * omega + wr * wr));
}

double correlation_time(const ModelParams& params) {
    if (!(params.kT > 0.0)) throw DomainError("correlation time is infinite at kT = 0");
    return params.hbar / (std::sqrt(6.0) * params.kT);
}

AdiabaticityReport adiabaticity_check(const ModelParams& params, double threshold, const Trajectory* traj) {
    AdiabaticityReport r;
    r.bandwidth = params.kT > 0.0 ? 1.0 / correlation_time(params) : 0.0;
    r.spacing = 2.0 * params.coupling * params.mean_radius();
    r.ratio = params.hbar * r.bandwidth / r.spacing;
    r.ok = r.ratio < threshold;
    if (traj != nullptr && !traj->states.empty()) {
        double rmin = norm(traj->states.front().r);
        for (const PhaseState& s : traj->states) rmin = std::min(rmin, norm(s.r));
        r.min_radius = rmin;
        r.ratio_at_min = params.hbar * r.bandwidth / (2.0 * params.coupling * rmin);
        r.ok_at_min = *r.ratio_at_min < threshold;
    }
    return r;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
    out << "omega,density\n";
    char buf[80];
    for (std::size_t j = 0; j < spectrum.omega.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", spectrum.omega[j], spectrum.density[j]);
        out << buf;
    }
}

std::vector<double> autocovariance(std::span<const double> samples, std::size_t max_lag) {
    const std::size_t n = samples.size();
    if (max_lag >= n) throw DomainError("autocovariance: lag exceeds series length");
    std::vector<double> c(max_lag + 1, 0.0);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        double sum = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) sum += samples[i] * samples[i + lag];
        c[lag] = sum / static_cast<double>(n - lag);
    }
    return c;
}

}  // namespace geolangevin
