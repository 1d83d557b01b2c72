#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>

#include "geolangevin/vec2.hpp"

namespace geolangevin {

/// Which deterministic force acts on the slow coordinate.
///  - simplified: force-free Brownian motion in the punctured plane (all closed forms assume this)
///  - full: keeps the repulsive electric force hbar^2/(M R^3) R-hat
enum class ForceMode { simplified, full };

std::string_view to_string(ForceMode mode) noexcept;
ForceMode force_mode_from_string(std::string_view text);

/// Physical and numerical constants of one model instance. Natural units: hbar = 1 by
/// default and the temperature is stored directly as the energy kT.
struct ModelParams {
    double mass = 1.0;           ///< M
    double friction = 1.0;       ///< eta
    double coupling = 1.0;       ///< g, fast-level energies are +-g|R|
    double kT = 4.0;             ///< thermal energy
    double hbar = 1.0;
    double duration = 20.0;      ///< path runs over [-duration/2, duration/2]
    Vec2 start{100.0, 0.0};      ///< R_i
    Vec2 end{0.0, 100.0};        ///< R_f
    double dt = 0.01;
    /// Excluded disc around the origin; defaults to 1e-3 |(R_i + R_f)/2|.
    std::optional<double> puncture_radius;
    /// Upper limit on the adiabatic noise band; the band is min(sqrt(6) kT / hbar, cap).
    double noise_band_cap = std::numeric_limits<double>::infinity();

    Vec2 mean_point() const noexcept { return 0.5 * (start + end); }
    double mean_radius() const noexcept { return norm(mean_point()); }
    double epsilon() const noexcept;
    double relaxation_time() const noexcept { return mass / friction; }
    double damping_rate() const noexcept { return friction / mass; }
    double t_begin() const noexcept { return -0.5 * duration; }
    double t_end() const noexcept { return 0.5 * duration; }
    /// Number of integration steps; the grid has steps() + 1 points.
    std::size_t steps() const noexcept;
    double omega_c() const noexcept;
    double omega_b() const noexcept;

    /// Throws ConfigError naming the dotted key of the first violated invariant.
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

}  // namespace geolangevin
