#pragma once

#include <array>

#include "geolangevin/params.hpp"
#include "geolangevin/vec2.hpp"

namespace geolangevin {

/// Symmetric 2x2 matrix stored as (xx, xy, yy).
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double trace() const noexcept { return xx + yy; }
    Vec2 apply(const Vec2& v) const noexcept { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
};

struct FastEnergies {
    double upper = 0.0;  ///< E_+ = +g|R|
    double lower = 0.0;  ///< E_- = -g|R|

    double spacing() const noexcept { return upper - lower; }
};

/// Geometric quantities of the lower level at one point of the punctured plane.
struct GaugeEval {
    Vec2 connection;           ///< A(R), tangential
    double scalar_potential;   ///< Phi(R) = hbar^2 / (2 M R^2)
    Vec2 electric_force;       ///< -grad Phi, radial and repulsive
    Sym2 metric;               ///< real part of the quantum geometric tensor
};

// Planar spin-1/2 model H = g R (cos phi sigma_x + sin phi sigma_y).
// Apart from fast_energies (which only needs R != 0), every function throws
// DomainError when |R| <= params.epsilon().
//
// The field B = curl A vanishes off the origin; the model never evaluates it.

FastEnergies fast_energies(const Vec2& r, const ModelParams& params);
Vec2 berry_connection(const Vec2& r, const ModelParams& params);
double scalar_potential(const Vec2& r, const ModelParams& params);
Vec2 electric_force(const Vec2& r, const ModelParams& params);
Sym2 metric_tensor(const Vec2& r, const ModelParams& params);
GaugeEval evaluate_gauge(const Vec2& r, const ModelParams& params);

/// Deterministic force on the slow coordinate for the chosen mode. Zero in simplified mode.
Vec2 deterministic_force(const Vec2& r, const ModelParams& params, ForceMode mode);

}  // namespace geolangevin
