#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geolangevin/errors.hpp"
#include "geolangevin/langevin.hpp"
#include "geolangevin/params.hpp"

namespace geolangevin {

enum class Conditioning { free, endpoint_binned };

std::string to_string(Conditioning c);
Conditioning conditioning_from_string(const std::string& text);

struct ShiftSample {
    std::size_t path_index = 0;
    double delta_e = 0.0;
    double gamma = 0.0;
    Vec2 endpoint;
    std::size_t puncture_events = 0;
    bool accepted = false;  ///< retained by the conditioning
    bool aborted = false;   ///< path could not avoid the puncture; excluded from statistics
};

struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
};

/// Freedman-Diaconis histogram; `bins` overrides the rule when > 0.
Histogram make_histogram(const std::vector<double>& values, int bins = 0);

struct ShiftEnsemble {
    std::vector<ShiftSample> samples;  ///< ordered by path index
    Conditioning conditioning = Conditioning::free;
    double bin_radius = 0.0;           ///< used only for endpoint_binned
    std::size_t n_retained = 0;
    std::size_t n_aborted = 0;
    double mean = 0.0;
    double variance = 0.0;             ///< unbiased sample variance of retained delta E
    double std_err_mean = 0.0;         ///< sqrt(variance / n_retained)
    double accepted_fraction = 0.0;    ///< n_retained / n_paths
    double abort_fraction = 0.0;
    Histogram histogram;
};

struct EnsembleOptions {
    std::size_t n_paths = 1000;
    std::uint64_t seed = 0;
    SimulationOptions simulation;
    Conditioning conditioning = Conditioning::free;
    /// Endpoint acceptance radius; defaults to 0.5 sqrt(2 d kT T / eta) with d = 2.
    std::optional<double> bin_radius;
    int histogram_bins = 0;
    /// Worker threads; 0 means GEO_LANGEVIN_THREADS or the hardware concurrency.
    unsigned threads = 0;
};

/// No path survived the endpoint conditioning.
class EmptyEnsembleError : public NumericalError {
public:
    EmptyEnsembleError(const std::string& what, std::vector<Vec2> endpoints)
        : NumericalError(what), endpoints_(std::move(endpoints)) {}
    const std::vector<Vec2>& endpoints() const noexcept { return endpoints_; }

private:
    std::vector<Vec2> endpoints_;
};

double default_bin_radius(const ModelParams& params);

/// Resolves a requested thread count against GEO_LANGEVIN_THREADS and the hardware.
unsigned resolve_threads(unsigned requested);

/// Runs `fn(i)` for i in [0, n) on up to `threads` workers. Results must be written by index.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn);

/// Simulates n_paths independent paths (substream i of the master seed drives path i) and
/// collects the level shift of each. Statistics are reduced in path order, so the result is
/// bit-identical for any thread count.
ShiftEnsemble run_ensemble(const ModelParams& params, const EnsembleOptions& options);

/// Recomputes mean/variance/stderr/histogram of the retained samples.
void recompute_statistics(ShiftEnsemble& ensemble, int histogram_bins = 0);

/// Samples CSV: path_index,deltaE,endpoint_x,endpoint_y,accepted
void write_samples_csv(std::ostream& out, const ShiftEnsemble& ensemble);

struct SweepSpec {
    std::string parameter;  ///< kT, hbar, eta, M, duration
    std::vector<double> values;
    /// Re-place R_i, R_f symmetrically about the fixed mean point with |R_f - R_i|^2 = 2 kT T / eta
    /// at every grid point.
    bool tie_endpoints_to_diffusion = false;
    double low_noise_threshold = 0.1;

    bool operator==(const SweepSpec&) const = default;
};

struct ScalingRow {
    double value = 0.0;
    bool low_noise = false;     ///< rows that are not low-noise are excluded from the fits
    double margin = 0.0;
    double sigma_mc = 0.0;
    double mean_mc = 0.0;
    double std_err_mean = 0.0;
    double sigma_analytic = 0.0;
    double sigma_simplified = 0.0;
    double mean_shift = 0.0;
};

struct PowerLawFit {
    double exponent = 0.0;
    double ci_low = 0.0;   ///< 95% confidence interval
    double ci_high = 0.0;
    std::size_t points = 0;
};

struct ScalingTable {
    SweepSpec sweep;
    std::vector<ScalingRow> rows;
    PowerLawFit sigma_fit;      ///< log sigma_MC vs log value
    PowerLawFit mean_fit;       ///< log |mean_MC| vs log value
    PowerLawFit analytic_fit;   ///< log sigma_analytic vs log value
};

/// Least-squares slope of log y against log x with a Student-t 95% interval.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

ModelParams apply_sweep_value(const ModelParams& base, const SweepSpec& sweep, double value);

ScalingTable scaling_study(const ModelParams& params, const SweepSpec& sweep, const EnsembleOptions& options);

}  // namespace geolangevin

#include "geolangevin/detail/parallel.hpp"
