#include "geolangevin/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "geolangevin/gauge.hpp"

namespace geolangevin {

InitialVelocity initial_velocity_from_string(const std::string& text) {
    if (text == "maxwell") return InitialVelocity::maxwell;
    if (text == "homogeneous") return InitialVelocity::homogeneous;
    throw ConfigError("unknown initial velocity '" + text + "' (expected maxwell|homogeneous)");
}

std::string to_string(InitialVelocity init) {
    return init == InitialVelocity::homogeneous ? "homogeneous" : "maxwell";
}

double segment_distance_to_origin(const Vec2& a, const Vec2& b) noexcept {
    const Vec2 d = b - a;
    const double len2 = norm2(d);
    if (len2 == 0.0) return norm(a);
    double s = -dot(a, d) / len2;
    s = std::clamp(s, 0.0, 1.0);
    return norm(a + s * d);
}

namespace {

struct StepCoefficients {
    double half_dt_over_m;
    double decay;        // e^{-g dt}
    double drift;        // (e^{g dt} - 1) / g
    double force_scale;  // std dev of the recorded force sample, sqrt(2 eta kT / dt)
    double kick_scale;   // velocity change per unit recorded force
};

StepCoefficients coefficients(const ModelParams& params) {
    const double g = params.damping_rate();
    const double gdt = g * params.dt;
    if (!(gdt < kStabilityLimit)) {
        std::ostringstream msg;
        msg << "dt*eta/M = " << gdt << " violates the stability guard (< " << kStabilityLimit << ")";
        throw ConfigError(msg.str(), "model.dt");
    }
    StepCoefficients c{};
    c.half_dt_over_m = 0.5 * params.dt / params.mass;
    c.decay = std::exp(-gdt);
    c.drift = std::expm1(gdt) / g;
    c.force_scale = std::sqrt(2.0 * params.friction * params.kT / params.dt);
    // Exact OU variance kT/M (1 - e^{-2 g dt}) expressed through the recorded force.
    c.kick_scale = (params.dt / params.mass) * std::sqrt(-std::expm1(-2.0 * gdt) / (2.0 * gdt));
    return c;
}

StepResult advance(const PhaseState& s, const ModelParams& params, ForceMode mode,
                   const StepCoefficients& c, RandomStream& rng, int max_redraws) {
    const double eps = params.epsilon();
    const Vec2 kicked = s.v + c.half_dt_over_m * deterministic_force(s.r, params, mode);
    const Vec2 damped = c.decay * kicked;
    for (int attempt = 0; attempt <= max_redraws; ++attempt) {
        Vec2 noise{};
        if (c.force_scale > 0.0) {
            noise.x = c.force_scale * rng.normal();
            noise.y = c.force_scale * rng.normal();
        }
        const Vec2 v = damped + c.kick_scale * noise;
        const Vec2 r = s.r + c.drift * v;
        if (segment_distance_to_origin(s.r, r) <= eps) continue;
        StepResult out;
        out.state.t = s.t + params.dt;
        out.state.r = r;
        out.state.v = v + c.half_dt_over_m * deterministic_force(r, params, mode);
        out.noise = noise;
        out.redraws = attempt;
        return out;
    }
    std::ostringstream msg;
    msg << "step from (" << s.r.x << ", " << s.r.y << ") at t = " << s.t << " entered the puncture disc "
        << (max_redraws + 1) << " times";
    throw PathAborted(msg.str());
}

}  // namespace

StepResult step(const PhaseState& state, const ModelParams& params, ForceMode mode,
                RandomStream& rng, int max_redraws) {
    if (!(norm(state.r) > params.epsilon())) throw DomainError("step: state lies inside the puncture disc");
    return advance(state, params, mode, coefficients(params), rng, max_redraws);
}

PhaseState step_state(const PhaseState& state, const ModelParams& params, ForceMode mode,
                      RandomStream& rng) {
    return step(state, params, mode, rng).state;
}

PhaseState homogeneous_state(const ModelParams& params, double t) {
    const double g = params.damping_rate();
    const double gT = g * params.duration;
    if (gT < 1e-12) {
        throw NumericalError("homogeneous solution: eta*T/M < 1e-12, boundary fit is ill-conditioned");
    }
    const double s = t - params.t_begin();
    const double denom = -std::expm1(-gT);  // 1 - e^{-gT}
    const Vec2 delta = params.start - params.end;
    const double shape = (std::exp(-g * s) - std::exp(-gT)) / denom;
    PhaseState out;
    out.t = t;
    out.r = params.end + shape * delta;
    out.v = (-g * std::exp(-g * s) / denom) * delta;
    return out;
}

Trajectory homogeneous_solution(const ModelParams& params) {
    params.validate();
    Trajectory traj;
    traj.params = params;
    const std::size_t n = params.steps();
    traj.states.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        traj.states.push_back(homogeneous_state(params, params.t_begin() + static_cast<double>(k) * params.dt));
    }
    // The closed form reproduces the endpoints only up to rounding; pin them.
    traj.states.front().r = params.start;
    traj.states.back().r = params.end;
    return traj;
}

Trajectory simulate(const ModelParams& params, const SimulationOptions& options, RandomStream& rng) {
    params.validate();
    const StepCoefficients c = coefficients(params);
    const std::size_t n = params.steps();

    Trajectory traj;
    traj.params = params;
    traj.states.reserve(n + 1);
    if (options.record_noise) traj.noise.reserve(n);

    PhaseState s;
    s.t = params.t_begin();
    s.r = params.start;
    if (options.initial_velocity == InitialVelocity::homogeneous) {
        s.v = homogeneous_state(params, s.t).v;
    } else {
        const double sd = std::sqrt(params.kT / params.mass);
        s.v.x = sd * rng.normal();
        s.v.y = sd * rng.normal();
    }
    traj.states.push_back(s);

    for (std::size_t k = 0; k < n; ++k) {
        StepResult next = advance(s, params, options.mode, c, rng, options.max_redraws_per_step);
        traj.puncture_events += static_cast<std::size_t>(next.redraws);
        if (traj.puncture_events > options.max_puncture_events) {
            std::ostringstream msg;
            msg << "path aborted after " << traj.puncture_events << " puncture events (limit "
                << options.max_puncture_events << ") at t = " << s.t;
            throw PathAborted(msg.str());
        }
        next.state.t = params.t_begin() + static_cast<double>(k + 1) * params.dt;
        s = next.state;
        traj.states.push_back(s);
        if (options.record_noise) traj.noise.push_back(next.noise);
    }
    return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const bool with_noise = !traj.noise.empty();
    out << (with_noise ? "t,Rx,Ry,vx,vy,Fx,Fy\n" : "t,Rx,Ry,vx,vy\n");
    char buf[64];
    auto put = [&](double v, bool last) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << (last ? '\n' : ',');
    };
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const PhaseState& s = traj.states[k];
        put(s.t, false);
        put(s.r.x, false);
        put(s.r.y, false);
        put(s.v.x, false);
        put(s.v.y, !with_noise);
        if (with_noise) {
            const Vec2 f = k < traj.noise.size() ? traj.noise[k] : Vec2{};
            put(f.x, false);
            put(f.y, true);
        }
    }
}

}  // namespace geolangevin
