#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "geolangevin/errors.hpp"
#include "geolangevin/params.hpp"
#include "geolangevin/random.hpp"
#include "geolangevin/vec2.hpp"

namespace geolangevin {

struct PhaseState {
    double t = 0.0;
    Vec2 r;
    Vec2 v;
};

/// Samples of the slow coordinate on the uniform grid t_k = -T/2 + k dt, k = 0..steps.
struct Trajectory {
    ModelParams params;
    std::vector<PhaseState> states;
    /// noise[k] is the stochastic force sample acting over [t_k, t_{k+1}); empty unless recorded.
    std::vector<Vec2> noise;
    /// Rejected (re-drawn) steps that would have entered the puncture disc.
    std::size_t puncture_events = 0;
};

enum class InitialVelocity {
    maxwell,      ///< stationary Maxwell draw, per-component variance kT/M
    homogeneous,  ///< dR0/dt at -T/2, so the noiseless path lands on R_f
};

InitialVelocity initial_velocity_from_string(const std::string& text);
std::string to_string(InitialVelocity init);

struct SimulationOptions {
    ForceMode mode = ForceMode::simplified;
    InitialVelocity initial_velocity = InitialVelocity::maxwell;
    bool record_noise = false;
    int max_redraws_per_step = 100;
    std::size_t max_puncture_events = 10000;
};

/// A path that could not be continued without entering the puncture disc.
class PathAborted : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Result of one integration step together with the force sample that drove it.
struct StepResult {
    PhaseState state;
    Vec2 noise;
    int redraws = 0;
};

/// Largest dt * eta / M the integrator accepts.
inline constexpr double kStabilityLimit = 0.5;

/// One step of M R'' = -eta R' + F_det(R) + F(t): half kick, exact Ornstein-Uhlenbeck velocity
/// update (damping and noise), drift over the exact free-flight length (e^{eta dt/M} - 1) M/eta,
/// half kick. Noise-free, force-free motion is reproduced exactly.
/// Steps whose straight segment meets the puncture disc are re-drawn; after
/// `max_redraws` failures PathAborted is thrown.
StepResult step(const PhaseState& state, const ModelParams& params, ForceMode mode,
                RandomStream& rng, int max_redraws = 100);

/// Convenience overload returning only the new state.
PhaseState step_state(const PhaseState& state, const ModelParams& params, ForceMode mode,
                      RandomStream& rng);

Trajectory simulate(const ModelParams& params, const SimulationOptions& options, RandomStream& rng);

/// Noiseless solution of M R'' + eta R' = 0 with R(-T/2) = R_i and R(T/2) = R_f:
/// R0(t) = R_f + (R_i - R_f) (e^{-g s} - e^{-g T}) / (1 - e^{-g T}), s = t + T/2, g = eta/M.
Trajectory homogeneous_solution(const ModelParams& params);

/// Closed-form R0 and its derivative at an arbitrary time.
PhaseState homogeneous_state(const ModelParams& params, double t);

/// CSV with header t,Rx,Ry,vx,vy[,Fx,Fy] and 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Shortest distance from the origin to the segment [a, b].
double segment_distance_to_origin(const Vec2& a, const Vec2& b) noexcept;

}  // namespace geolangevin
