#include "geolangevin/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "geolangevin/analytic.hpp"
#include "geolangevin/berry_phase.hpp"

namespace geolangevin {

std::string to_string(Conditioning c) {
    return c == Conditioning::endpoint_binned ? "endpoint_binned" : "free";
}

Conditioning conditioning_from_string(const std::string& text) {
    if (text == "free") return Conditioning::free;
    if (text == "endpoint_binned") return Conditioning::endpoint_binned;
    throw ConfigError("unknown conditioning '" + text + "' (expected free|endpoint_binned)");
}

double default_bin_radius(const ModelParams& params) {
    constexpr double dims = 2.0;
    return 0.5 * std::sqrt(2.0 * dims * params.kT * params.duration / params.friction);
}

unsigned resolve_threads(unsigned requested) {
    unsigned n = requested;
    if (n == 0) {
        n = std::max(1u, std::thread::hardware_concurrency());
    }
    if (const char* env = std::getenv("GEO_LANGEVIN_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long cap = std::strtoul(env, &end, 10);
        if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return std::max(1u, n);
}

Histogram make_histogram(const std::vector<double>& values, int bins) {
    Histogram h;
    if (values.empty()) return h;
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    std::size_t count = 1;
    if (bins > 0) {
        count = static_cast<std::size_t>(bins);
    } else if (hi > lo) {
        auto quantile = [&](double q) {
            const double pos = q * static_cast<double>(sorted.size() - 1);
            const auto i = static_cast<std::size_t>(pos);
            const double frac = pos - static_cast<double>(i);
            return i + 1 < sorted.size() ? sorted[i] * (1.0 - frac) + sorted[i + 1] * frac : sorted[i];
        };
        const double iqr = quantile(0.75) - quantile(0.25);
        const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
        if (width > 0.0) count = static_cast<std::size_t>(std::ceil((hi - lo) / width));
        count = std::clamp<std::size_t>(count, 1, 1000);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    const double left = hi > lo ? lo : lo - 0.5;
    h.edges.resize(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
        h.edges[i] = left + span * static_cast<double>(i) / static_cast<double>(count);
    }
    h.counts.assign(count, 0);
    for (double v : sorted) {
        auto bin = static_cast<std::size_t>((v - left) / span * static_cast<double>(count));
        h.counts[std::min(bin, count - 1)] += 1;
    }
    return h;
}

void recompute_statistics(ShiftEnsemble& e, int histogram_bins) {
    std::vector<double> kept;
    kept.reserve(e.samples.size());
    e.n_aborted = 0;
    for (const ShiftSample& s : e.samples) {
        if (s.aborted) {
            ++e.n_aborted;
        } else if (s.accepted) {
            kept.push_back(s.delta_e);
        }
    }
    e.n_retained = kept.size();
    const double total = static_cast<double>(e.samples.size());
    e.accepted_fraction = total > 0.0 ? static_cast<double>(e.n_retained) / total : 0.0;
    e.abort_fraction = total > 0.0 ? static_cast<double>(e.n_aborted) / total : 0.0;
    e.mean = 0.0;
    e.variance = 0.0;
    e.std_err_mean = 0.0;
    if (!kept.empty()) {
        double sum = 0.0;
        for (double v : kept) sum += v;
        e.mean = sum / static_cast<double>(kept.size());
        if (kept.size() > 1) {
            double ss = 0.0;
            for (double v : kept) ss += (v - e.mean) * (v - e.mean);
            e.variance = ss / static_cast<double>(kept.size() - 1);
        }
        e.std_err_mean = std::sqrt(e.variance / static_cast<double>(kept.size()));
    }
    e.histogram = make_histogram(kept, histogram_bins);
}

ShiftEnsemble run_ensemble(const ModelParams& params, const EnsembleOptions& options) {
    if (options.n_paths < 2) throw ConfigError("ensemble needs at least 2 paths", "ensemble.n_paths");
    params.validate();

    ShiftEnsemble e;
    e.conditioning = options.conditioning;
    e.bin_radius = options.bin_radius.value_or(default_bin_radius(params));
    if (e.conditioning == Conditioning::endpoint_binned && !(e.bin_radius > 0.0)) {
        throw ConfigError("bin radius must be > 0 for endpoint conditioning", "ensemble.bin_radius");
    }
    e.samples.resize(options.n_paths);

    parallel_for(options.n_paths, resolve_threads(options.threads), [&](std::size_t i) {
        ShiftSample& s = e.samples[i];
        s.path_index = i;
        RandomStream rng = RandomStream::substream(options.seed, i);
        try {
            const Trajectory traj = simulate(params, options.simulation, rng);
            const PhaseResult phase = accumulate_phase(traj);
            s.gamma = phase.gamma;
            s.delta_e = phase.shift;
            s.endpoint = traj.states.back().r;
            s.puncture_events = traj.puncture_events;
            s.accepted = options.conditioning == Conditioning::free ||
                         norm(s.endpoint - params.end) < e.bin_radius;
        } catch (const NumericalError&) {
            s.aborted = true;
            s.accepted = false;
            s.delta_e = std::numeric_limits<double>::quiet_NaN();
            s.gamma = std::numeric_limits<double>::quiet_NaN();
        }
    });

    recompute_statistics(e, options.histogram_bins);
    if (e.n_retained == 0) {
        std::vector<Vec2> endpoints;
        double nearest = std::numeric_limits<double>::infinity();
        for (const ShiftSample& s : e.samples) {
            if (s.aborted) continue;
            endpoints.push_back(s.endpoint);
            nearest = std::min(nearest, norm(s.endpoint - params.end));
        }
        std::ostringstream msg;
        msg << "no path retained: " << e.n_aborted << " aborted, " << endpoints.size()
            << " completed; nearest endpoint is " << nearest << " from R_f (bin radius " << e.bin_radius << ")";
        throw EmptyEnsembleError(msg.str(), std::move(endpoints));
    }
    return e;
}

void write_samples_csv(std::ostream& out, const ShiftEnsemble& ensemble) {
    out << "path_index,deltaE,endpoint_x,endpoint_y,accepted\n";
    char buf[160];
    for (const ShiftSample& s : ensemble.samples) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%d\n", s.path_index, s.delta_e, s.endpoint.x,
                      s.endpoint.y, s.accepted ? 1 : 0);
        out << buf;
    }
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    PowerLawFit fit;
    fit.points = lx.size();
    if (lx.size() < 2) {
        fit.exponent = std::numeric_limits<double>::quiet_NaN();
        fit.ci_low = fit.ci_high = fit.exponent;
        return fit;
    }
    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    fit.exponent = sxy / sxx;
    if (lx.size() < 3) {
        fit.ci_low = -std::numeric_limits<double>::infinity();
        fit.ci_high = std::numeric_limits<double>::infinity();
        return fit;
    }
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - my - fit.exponent * (lx[i] - mx);
        ssr += r * r;
    }
    const double se = std::sqrt(ssr / (n - 2.0) / sxx);
    const boost::math::students_t dist(n - 2.0);
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    fit.ci_low = fit.exponent - t * se;
    fit.ci_high = fit.exponent + t * se;
    return fit;
}

ModelParams apply_sweep_value(const ModelParams& base, const SweepSpec& sweep, double value) {
    ModelParams p = base;
    if (sweep.parameter == "kT") {
        p.kT = value;
    } else if (sweep.parameter == "hbar") {
        p.hbar = value;
    } else if (sweep.parameter == "eta") {
        p.friction = value;
    } else if (sweep.parameter == "M") {
        p.mass = value;
    } else if (sweep.parameter == "duration") {
        p.duration = value;
    } else {
        throw ConfigError("cannot sweep '" + sweep.parameter + "' (expected kT|hbar|eta|M|duration)", "sweep.parameter");
    }
    if (sweep.tie_endpoints_to_diffusion) {
        const Vec2 centre = base.mean_point();
        Vec2 dir = base.end - base.start;
        if (norm(dir) == 0.0) dir = Vec2{-centre.y, centre.x};
        dir = dir / norm(dir);
        const double gap = std::sqrt(2.0 * p.kT * p.duration / p.friction);
        p.start = centre - 0.5 * gap * dir;
        p.end = centre + 0.5 * gap * dir;
        if (!base.puncture_radius) p.puncture_radius = base.epsilon();
    }
    return p;
}

ScalingTable scaling_study(const ModelParams& params, const SweepSpec& sweep, const EnsembleOptions& options) {
    ScalingTable table;
    table.sweep = sweep;
    std::vector<double> xs;
    std::vector<double> sig;
    std::vector<double> mean;
    std::vector<double> an;
    for (double value : sweep.values) {
        const ModelParams p = apply_sweep_value(params, sweep, value);
        p.validate();
        ScalingRow row;
        row.value = value;
        const LowNoiseCheck ln = low_noise_check(p, sweep.low_noise_threshold);
        row.margin = ln.margin;
        row.low_noise = ln.ok;
        const ShiftEnsemble e = run_ensemble(p, options);
        row.sigma_mc = std::sqrt(e.variance);
        row.mean_mc = e.mean;
        row.std_err_mean = e.std_err_mean;
        row.sigma_analytic = sigma_analytic(p);
        row.sigma_simplified = sigma_simplified(p);
        row.mean_shift = mean_shift(p);
        table.rows.push_back(row);
        if (row.low_noise) {
            xs.push_back(value);
            sig.push_back(row.sigma_mc);
            mean.push_back(std::abs(row.mean_mc));
            an.push_back(row.sigma_analytic);
        }
    }
    table.sigma_fit = fit_power_law(xs, sig);
    table.mean_fit = fit_power_law(xs, mean);
    table.analytic_fit = fit_power_law(xs, an);
    return table;
}

}  // namespace geolangevin
