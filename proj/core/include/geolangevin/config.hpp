#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geolangevin/ensemble.hpp"
#include "geolangevin/langevin.hpp"
#include "geolangevin/params.hpp"
#include "geolangevin/spectral.hpp"
#include "geolangevin/validation.hpp"

namespace geolangevin {

enum class UnitSystem {
    natural,  ///< hbar = 1 style numbers, kT given directly
    ev,       ///< energies in eV; model.temperature_K may replace model.kT
};

std::string to_string(UnitSystem units);

/// Boltzmann constant in eV/K.
inline constexpr double kBoltzmannEv = 8.617333262e-5;

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// One run of the command-line tool. Every field has a default, so an empty document is valid.
struct RunConfig {
    ModelParams model;
    ForceMode force_mode = ForceMode::simplified;
    UnitSystem units = UnitSystem::natural;
    std::optional<double> temperature_kelvin;  ///< only with units = ev; sets model.kT

    std::size_t n_paths = 1000;
    Conditioning conditioning = Conditioning::free;
    std::optional<double> bin_radius;
    /// Required by every stochastic command; there is no time-based fallback.
    std::optional<std::uint64_t> seed;
    InitialVelocity initial_velocity = InitialVelocity::maxwell;
    int histogram_bins = 0;

    SignalKind spectrum_signal = SignalKind::position;
    int spectrum_segments = kDefaultWelchSegments;
    std::size_t spectrum_paths = 1;

    double low_noise_threshold = 0.1;
    double adiabatic_threshold = 0.1;

    ValidationBudget budget;  ///< budget.seed mirrors `seed` when a run starts
    std::optional<SweepSpec> sweep;

    std::string output_directory = "out";
    std::vector<std::string> output_formats{"csv", "json"};

    bool operator==(const RunConfig&) const = default;
};

/// Library version string, e.g. "0.1.0".
std::string_view library_version() noexcept;

/// Splits a config document into (key, value) pairs without interpreting them.
ConfigEntries parse_entries(std::string_view text);

/// Parses `key = value` lines; `#` starts a comment. Unknown or repeated keys, malformed values
/// and violated invariants throw ConfigError carrying the dotted key.
RunConfig parse_config(std::string_view text);

/// Same as parse_config for already split pairs (later pairs do not override earlier ones;
/// a repeated key is an error).
RunConfig config_from_entries(const ConfigEntries& entries);

/// Every key with its current value, in a fixed order, formatted so that parsing it back
/// gives an equal RunConfig.
ConfigEntries config_entries(const RunConfig& config);

/// config_entries rendered as a config document.
std::string serialize_config(const RunConfig& config);

/// All accepted keys.
const std::vector<std::string>& known_config_keys();

/// Splits "key=value" (spaces around '=' allowed). Throws ConfigError on a missing '='.
std::pair<std::string, std::string> split_assignment(std::string_view text);

}  // namespace geolangevin
