#include "geolangevin/path_measure.hpp"

#include "geolangevin/errors.hpp"
#include "geolangevin/gauge.hpp"

namespace geolangevin {

PathAction om_action(const Trajectory& traj, const ModelParams& params, ForceMode mode,
                     ActionStencil stencil) {
    if (!(params.kT > 0.0)) throw DomainError("path measure undefined at kT = 0");
    const std::size_t n = traj.states.size();
    if (n < 3) throw DomainError("path measure needs at least 3 grid points");

    const double dt = params.dt;
    const double m = params.mass;
    const double eta = params.friction;
    auto at = [&](std::size_t k) { return traj.states[k].r; };
    auto residual = [&](std::size_t k, const Vec2& acc, const Vec2& vel) {
        return m * acc + eta * vel - deterministic_force(at(k), params, mode);
    };

    PathAction out;
    double sum = 0.0;
    const bool trapezoid = stencil == ActionStencil::trapezoid;
    if (trapezoid) {
        out.residuals.reserve(n);
        Vec2 acc;
        if (n >= 4) {
            acc = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (dt * dt);
        } else {
            acc = (at(0) - 2.0 * at(1) + at(2)) / (dt * dt);
        }
        const Vec2 vel = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * dt);
        out.residuals.push_back(residual(0, acc, vel));
        sum += 0.5 * norm2(out.residuals.back());
    } else {
        out.residuals.reserve(n - 2);
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const Vec2 acc = (at(k + 1) - 2.0 * at(k) + at(k - 1)) / (dt * dt);
        const Vec2 vel = (at(k + 1) - at(k - 1)) / (2.0 * dt);
        out.residuals.push_back(residual(k, acc, vel));
        sum += norm2(out.residuals.back());
    }
    if (trapezoid) {
        const std::size_t e = n - 1;
        Vec2 acc;
        if (n >= 4) {
            acc = (2.0 * at(e) - 5.0 * at(e - 1) + 4.0 * at(e - 2) - at(e - 3)) / (dt * dt);
        } else {
            acc = (at(e) - 2.0 * at(e - 1) + at(e - 2)) / (dt * dt);
        }
        const Vec2 vel = (3.0 * at(e) - 4.0 * at(e - 1) + at(e - 2)) / (2.0 * dt);
        out.residuals.push_back(residual(e, acc, vel));
        sum += 0.5 * norm2(out.residuals.back());
    }
    out.action = sum * dt / (4.0 * eta * params.kT);
    return out;
}

}  // namespace geolangevin
