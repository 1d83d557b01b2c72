#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>
#include <iosfwd>

#include "geolangevin/langevin.hpp"
#include "geolangevin/params.hpp"

namespace geolangevin {

enum class SignalKind { position, velocity, force, energy };

std::string to_string(SignalKind kind);
SignalKind signal_kind_from_string(const std::string& text);

/// One-sided spectral density on an ascending angular-frequency grid (omega = 0 excluded).
///
/// Normalization: a signal with covariance K(t) has density J with
///   K(t) = (1/pi) int_0^inf J(omega) cos(omega t) d omega,
/// so white noise with <F(t) F(s)> = 2 eta kT delta(t - s) has J_F = 2 eta kT, and the mean
/// square of a signal is (1/pi) sum_j J_j d omega. Densities are per Cartesian component
/// (the x and y estimates are averaged).
struct Spectrum {
    std::vector<double> omega;
    std::vector<double> density;
    SignalKind kind = SignalKind::position;

    /// (1/pi) sum J d omega over the grid.
    double mean_square() const;
};

inline constexpr int kDefaultWelchSegments = 16;

/// Spectral estimate of one signal of a trajectory.
///  - position: each of `segments` contiguous blocks is bridge-detrended (the chord between its
///    end values is removed) and expanded in a sine series, J(n pi / L) = (L/2) |b_n|^2.
///  - velocity, force: Welch average, Hann window, 50% overlap, mean removed.
///  - energy: (M/2) times the velocity estimate.
/// Throws DomainError when the trajectory is too short for the requested segment count or
/// the force record is missing.
Spectrum periodogram(const Trajectory& traj, SignalKind signal, int segments = kDefaultWelchSegments);

/// Welch estimate of a uniformly sampled scalar series (used for velocity and force).
Spectrum welch_density(std::span<const double> samples, double dt, int segments);

/// Sine-series estimate of one bridge-detrended block.
Spectrum sine_density(std::span<const double> samples, double dt);

/// Element-wise mean of spectra sharing a grid.
Spectrum average(std::span<const Spectrum> spectra);

/// 2 eta kT / (M^2 omega^2 (omega^2 + omega_r^2)), omega_r = eta / M. DomainError at omega <= 0.
double transfer_JR(double omega, const ModelParams& params);
/// 2 eta kT / (M^2 (omega^2 + omega_r^2)).
double transfer_Jv(double omega, const ModelParams& params);
/// eta kT / (M (omega^2 + omega_r^2)) for omega <= cutoff, zero above.
double energy_spectral_density(double omega, const ModelParams& params, double cutoff);

/// hbar / (sqrt(6) kT). DomainError at kT = 0.
double correlation_time(const ModelParams& params);

inline constexpr double kDefaultAdiabaticThreshold = 0.1;

struct AdiabaticityReport {
    double bandwidth = 0.0;  ///< noise bandwidth 1/tau_c (0 at kT = 0)
    double spacing = 0.0;    ///< fast level spacing 2 g |Rbar|
    double ratio = 0.0;      ///< hbar bandwidth / spacing
    bool ok = false;         ///< ratio < threshold
    std::optional<double> min_radius;     ///< smallest |R| on the supplied trajectory
    std::optional<double> ratio_at_min;   ///< ratio evaluated with 2 g min_radius
    std::optional<bool> ok_at_min;
};

AdiabaticityReport adiabaticity_check(const ModelParams& params,
                                      double threshold = kDefaultAdiabaticThreshold,
                                      const Trajectory* traj = nullptr);

/// CSV with header omega,density and 17 significant digits.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);

/// Lag-averaged autocovariance <x(t) x(t + k dt)> of a series for k = 0..max_lag.
std::vector<double> autocovariance(std::span<const double> samples, std::size_t max_lag);

}  // namespace geolangevin
