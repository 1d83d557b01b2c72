#include "geolangevin/gauge.hpp"

#include <sstream>

#include "geolangevin/errors.hpp"

namespace geolangevin {

namespace {

double checked_radius2(const Vec2& r, double eps) {
    const double r2 = norm2(r);
    if (!(r2 > eps * eps)) {
        std::ostringstream msg;
        msg << "point (" << r.x << ", " << r.y << ") lies inside the puncture radius " << eps;
        throw DomainError(msg.str());
    }
    return r2;
}

}  // namespace

FastEnergies fast_energies(const Vec2& r, const ModelParams& params) {
    const double radius = norm(r);
    if (!(radius > 0.0)) throw DomainError("fast energies are degenerate at the origin");
    return {params.coupling * radius, -params.coupling * radius};
}

Vec2 berry_connection(const Vec2& r, const ModelParams& params) {
    const double r2 = checked_radius2(r, params.epsilon());
    const double scale = params.hbar / (2.0 * r2);
    return {scale * r.y, -scale * r.x};
}

double scalar_potential(const Vec2& r, const ModelParams& params) {
    const double r2 = checked_radius2(r, params.epsilon());
    return params.hbar * params.hbar / (2.0 * params.mass * r2);
}

Vec2 electric_force(const Vec2& r, const ModelParams& params) {
    const double r2 = checked_radius2(r, params.epsilon());
    const double scale = params.hbar * params.hbar / (params.mass * r2 * r2);
    return scale * r;
}

Sym2 metric_tensor(const Vec2& r, const ModelParams& params) {
    const double r2 = checked_radius2(r, params.epsilon());
    // Only the angle enters the eigenvectors: g_ij = (delta_ij - r_i r_j / r^2) / (4 r^2).
    const double s = 1.0 / (4.0 * r2);
    return {s * (1.0 - r.x * r.x / r2), -s * r.x * r.y / r2, s * (1.0 - r.y * r.y / r2)};
}

GaugeEval evaluate_gauge(const Vec2& r, const ModelParams& params) {
    return {berry_connection(r, params), scalar_potential(r, params), electric_force(r, params),
            metric_tensor(r, params)};
}

Vec2 deterministic_force(const Vec2& r, const ModelParams& params, ForceMode mode) {
    if (mode == ForceMode::simplified) return {};
    return electric_force(r, params);
}

}  // namespace geolangevin
