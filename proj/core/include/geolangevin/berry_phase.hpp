#pragma once

#include <optional>
#include <span>

#include "geolangevin/langevin.hpp"
#include "geolangevin/params.hpp"

namespace geolangevin {

/// Geometric phase of the lower level accumulated along one path.
struct PhaseResult {
    double gamma = 0.0;      ///< gamma_- = -delta_phi / 2
    double delta_phi = 0.0;  ///< unwrapped swept angle of R(t)
    double shift = 0.0;      ///< level shift hbar * gamma / T
    bool closed = false;     ///< |R(end) - R(start)| within the closure tolerance
    std::optional<long> winding;  ///< delta_phi / 2 pi, only for closed paths
};

struct PhaseOptions {
    /// Closure tolerance relative to |R(start)|.
    double closure_tolerance = 1e-9;
};

/// Sum of per-step signed angle increments. Throws NumericalError if any increment reaches
/// pi/2 (step too coarse near the origin) and DomainError if a sample is inside the puncture.
double unwrapped_angle(std::span<const PhaseState> states, double puncture_radius);

PhaseResult accumulate_phase(const Trajectory& traj, const PhaseOptions& options = {});

/// hbar * gamma / T.
double level_shift(double gamma, const ModelParams& params);

/// Independent route to gamma_-: (1/hbar) sum_k A(midpoint_k) . (R_{k+1} - R_k).
double connection_line_integral(const Trajectory& traj);

}  // namespace geolangevin
