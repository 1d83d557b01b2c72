#include "geolangevin/berry_phase.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "geolangevin/errors.hpp"
#include "geolangevin/gauge.hpp"

namespace geolangevin {

double unwrapped_angle(std::span<const PhaseState> states, double puncture_radius) {
    if (states.empty()) return 0.0;
    double total = 0.0;
    const double eps2 = puncture_radius * puncture_radius;
    if (!(norm2(states.front().r) > eps2)) throw DomainError("path starts inside the puncture disc");
    for (std::size_t k = 1; k < states.size(); ++k) {
        const Vec2& a = states[k - 1].r;
        const Vec2& b = states[k].r;
        if (!(norm2(b) > eps2)) {
            std::ostringstream msg;
            msg << "path sample " << k << " lies inside the puncture disc";
            throw DomainError(msg.str());
        }
        const double d = std::atan2(cross(a, b), dot(a, b));
        if (std::abs(d) >= 0.5 * std::numbers::pi) {
            std::ostringstream msg;
            msg << "angle increment " << d << " at sample " << k << " is aliased (step too coarse near the origin)";
            throw NumericalError(msg.str());
        }
        total += d;
    }
    return total;
}

double level_shift(double gamma, const ModelParams& params) {
    if (!(params.duration > 0.0)) throw DomainError("level shift needs a positive duration");
    return params.hbar * gamma / params.duration;
}

PhaseResult accumulate_phase(const Trajectory& traj, const PhaseOptions& options) {
    PhaseResult out;
    out.delta_phi = unwrapped_angle(traj.states, traj.params.epsilon());
    out.gamma = -0.5 * out.delta_phi;
    out.shift = level_shift(out.gamma, traj.params);
    if (traj.states.size() >= 2) {
        const Vec2 first = traj.states.front().r;
        const Vec2 gap = traj.states.back().r - first;
        out.closed = norm(gap) < options.closure_tolerance * norm(first);
        if (out.closed) out.winding = std::lround(out.delta_phi / (2.0 * std::numbers::pi));
    }
    return out;
}

double connection_line_integral(const Trajectory& traj) {
    double total = 0.0;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        const Vec2& a = traj.states[k - 1].r;
        const Vec2& b = traj.states[k].r;
        total += dot(berry_connection(0.5 * (a + b), traj.params), b - a);
    }
    return total / traj.params.hbar;
}

}  // namespace geolangevin
