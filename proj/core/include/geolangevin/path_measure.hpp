#pragma once

#include <vector>

#include "geolangevin/langevin.hpp"
#include "geolangevin/params.hpp"

namespace geolangevin {

/// How the Langevin operator is discretized at the ends of the grid.
enum class ActionStencil {
    /// Central differences inside, one-sided second-order stencils at the two end nodes,
    /// trapezoidal time integral. The default for whole paths.
    trapezoid,
    /// Central differences on interior nodes only, rectangle weights. Natural when the first
    /// two and the last node are conditioned on (given initial state, pinned endpoint); it is the
    /// stencil whose weights reproduce the integrator's own Gaussian step density.
    interior,
};

/// Onsager-Machlup exponent of a discretized path, S = (1 / 4 eta kT) int |L R|^2 dt with
/// L R = M R'' + eta R' - E(R). Only differences of S carry meaning (no normalization).
struct PathAction {
    double action = 0.0;
    std::vector<Vec2> residuals;  ///< L R at every node used by the stencil
};

/// Throws DomainError if kT == 0 or the grid has fewer than 3 points.
/// M, eta, kT and dt are taken from `params`, not from traj.params, so a mismatched measure
/// can be evaluated on purpose.
PathAction om_action(const Trajectory& traj, const ModelParams& params, ForceMode mode,
                     ActionStencil stencil = ActionStencil::trapezoid);

}  // namespace geolangevin
