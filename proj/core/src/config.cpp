#include "geolangevin/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "geolangevin/errors.hpp"

namespace geolangevin {

std::string to_string(UnitSystem units) { return units == UnitSystem::ev ? "ev" : "natural"; }

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw ConfigError("expected a number, got '" + text + "'", key);
    return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("expected a non-negative integer, got '" + text + "'", key);
    }
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    int v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw ConfigError("expected an integer, got '" + text + "'", key);
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ConfigError("expected true or false, got '" + text + "'", key);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    return out;
}

template <class Fn>
auto rethrow_with_key(const std::string& key, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        if (!e.key().empty()) throw;
        throw ConfigError(e.what(), key);
    }
}

SweepSpec& sweep_of(RunConfig& c) {
    if (!c.sweep) c.sweep.emplace();
    return *c.sweep;
}

struct KeyHandler {
    std::string key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::optional<std::string>(const RunConfig&)> get;
};

KeyHandler number(std::string key, double ModelParams::*field) {
    return {key,
            [key, field](RunConfig& c, const std::string& v) { c.model.*field = parse_double(key, v); },
            [field](const RunConfig& c) -> std::optional<std::string> { return format_double(c.model.*field); }};
}

const std::vector<KeyHandler>& handlers() {
    static const std::vector<KeyHandler> table = [] {
        std::vector<KeyHandler> t;
        t.push_back(number("model.M", &ModelParams::mass));
        t.push_back(number("model.eta", &ModelParams::friction));
        t.push_back(number("model.g", &ModelParams::coupling));
        t.push_back({"model.kT",
                     [](RunConfig& c, const std::string& v) { c.model.kT = parse_double("model.kT", v); },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         if (c.temperature_kelvin) return std::nullopt;
                         return format_double(c.model.kT);
                     }});
        t.push_back({"model.temperature_K",
                     [](RunConfig& c, const std::string& v) {
                         c.temperature_kelvin = parse_double("model.temperature_K", v);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         if (!c.temperature_kelvin) return std::nullopt;
                         return format_double(*c.temperature_kelvin);
                     }});
        t.push_back(number("model.hbar", &ModelParams::hbar));
        t.push_back(number("model.duration", &ModelParams::duration));
        t.push_back(number("model.dt", &ModelParams::dt));
        auto coord = [&t](std::string key, Vec2 ModelParams::*point, double Vec2::*axis) {
            t.push_back({key,
                         [key, point, axis](RunConfig& c, const std::string& v) {
                             (c.model.*point).*axis = parse_double(key, v);
                         },
                         [point, axis](const RunConfig& c) -> std::optional<std::string> {
                             return format_double((c.model.*point).*axis);
                         }});
        };
        coord("model.start_x", &ModelParams::start, &Vec2::x);
        coord("model.start_y", &ModelParams::start, &Vec2::y);
        coord("model.end_x", &ModelParams::end, &Vec2::x);
        coord("model.end_y", &ModelParams::end, &Vec2::y);
        t.push_back({"model.puncture_radius",
                     [](RunConfig& c, const std::string& v) {
                         c.model.puncture_radius = parse_double("model.puncture_radius", v);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         if (!c.model.puncture_radius) return std::nullopt;
                         return format_double(*c.model.puncture_radius);
                     }});
        t.push_back(number("model.noise_band_cap", &ModelParams::noise_band_cap));

        t.push_back({"mode.force",
                     [](RunConfig& c, const std::string& v) {
                         c.force_mode = rethrow_with_key("mode.force", [&] { return force_mode_from_string(v); });
                     },
                     [](const RunConfig& c) -> std::optional<std::string> { return std::string(to_string(c.force_mode)); }});
        t.push_back({"mode.units",
                     [](RunConfig& c, const std::string& v) {
                         if (v == "natural") c.units = UnitSystem::natural;
                         else if (v == "ev") c.units = UnitSystem::ev;
                         else throw ConfigError("expected natural|ev, got '" + v + "'", "mode.units");
                     },
                     [](const RunConfig& c) -> std::optional<std::string> { return to_string(c.units); }});

        t.push_back({"ensemble.n_paths",
                     [](RunConfig& c, const std::string& v) { c.n_paths = parse_unsigned("ensemble.n_paths", v); },
                     [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.n_paths); }});
        t.push_back({"ensemble.conditioning",
                     [](RunConfig& c, const std::string& v) {
                         c.conditioning =
                             rethrow_with_key("ensemble.conditioning", [&] { return conditioning_from_string(v); });
                     },
                     [](const RunConfig& c) -> std::optional<std::string> { return to_string(c.conditioning); }});
        t.push_back({"ensemble.bin_radius",
                     [](RunConfig& c, const std::string& v) { c.bin_radius = parse_double("ensemble.bin_radius", v); },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         if (!c.bin_radius) return std::nullopt;
                         return format_double(*c.bin_radius);
                     }});
        t.push_back({"ensemble.seed",
                     [](RunConfig& c, const std::string& v) { c.seed = parse_unsigned("ensemble.seed", v); },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         if (!c.seed) return std::nullopt;
                         return std::to_string(*c.seed);
                     }});
        t.push_back({"ensemble.initial_velocity",
                     [](RunConfig& c, const std::string& v) {
                         c.initial_velocity = rethrow_with_key("ensemble.initial_velocity",
                                                               [&] { return initial_velocity_from_string(v); });
                     },
                     [](const RunConfig& c) -> std::optional<std::string> { return to_string(c.initial_velocity); }});
        t.push_back({"ensemble.histogram_bins",
                     [](RunConfig& c, const std::string& v) {
                         c.histogram_bins = parse_int("ensemble.histogram_bins", v);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.histogram_bins); }});

        t.push_back({"spectrum.signal",
                     [](RunConfig& c, const std::string& v) {
                         c.spectrum_signal = rethrow_with_key("spectrum.signal", [&] { return signal_kind_from_string(v); });
                     },
                     [](const RunConfig& c) -> std::optional<std::string> { return to_string(c.spectrum_signal); }});
        t.push_back({"spectrum.segments",
                     [](RunConfig& c, const std::string& v) { c.spectrum_segments = parse_int("spectrum.segments", v); },
                     [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.spectrum_segments); }});
        t.push_back({"spectrum.paths",
                     [](RunConfig& c, const std::string& v) { c.spectrum_paths = parse_unsigned("spectrum.paths", v); },
                     [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.spectrum_paths); }});

        t.push_back({"thresholds.low_noise",
                     [](RunConfig& c, const std::string& v) {
                         c.low_noise_threshold = parse_double("thresholds.low_noise", v);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> { return format_double(c.low_noise_threshold); }});
        t.push_back({"thresholds.adiabatic",
                     [](RunConfig& c, const std::string& v) {
                         c.adiabatic_threshold = parse_double("thresholds.adiabatic", v);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> { return format_double(c.adiabatic_threshold); }});

        auto budget_size = [&t](std::string key, std::size_t ValidationBudget::*field) {
            t.push_back({key,
                         [key, field](RunConfig& c, const std::string& v) { c.budget.*field = parse_unsigned(key, v); },
                         [field](const RunConfig& c) -> std::optional<std::string> {
                             return std::to_string(c.budget.*field);
                         }});
        };
        budget_size("validate.n_paths", &ValidationBudget::n_paths);
        budget_size("validate.noise_steps", &ValidationBudget::noise_steps);
        budget_size("validate.spectrum_paths", &ValidationBudget::spectrum_paths);
        budget_size("validate.om_samples", &ValidationBudget::om_samples);
        budget_size("validate.om_pairs", &ValidationBudget::om_pairs);
        t.push_back({"validate.action_friction_scale",
                     [](RunConfig& c, const std::string& v) {
                         c.budget.action_friction_scale = parse_double("validate.action_friction_scale", v);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         return format_double(c.budget.action_friction_scale);
                     }});

        t.push_back({"sweep.parameter",
                     [](RunConfig& c, const std::string& v) { sweep_of(c).parameter = v; },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         if (!c.sweep) return std::nullopt;
                         return c.sweep->parameter;
                     }});
        t.push_back({"sweep.values",
                     [](RunConfig& c, const std::string& v) {
                         std::vector<double> values;
                         for (const std::string& item : split_list(v)) values.push_back(parse_double("sweep.values", item));
                         sweep_of(c).values = std::move(values);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         if (!c.sweep) return std::nullopt;
                         std::vector<std::string> items;
                         for (double x : c.sweep->values) items.push_back(format_double(x));
                         return join(items);
                     }});
        t.push_back({"sweep.tie_endpoints",
                     [](RunConfig& c, const std::string& v) {
                         sweep_of(c).tie_endpoints_to_diffusion = parse_bool("sweep.tie_endpoints", v);
                     },
                     [](const RunConfig& c) -> std::optional<std::string> {
                         if (!c.sweep) return std::nullopt;
                         return std::string(c.sweep->tie_endpoints_to_diffusion ? "true" : "false");
                     }});

        t.push_back({"output.directory",
                     [](RunConfig& c, const std::string& v) { c.output_directory = v; },
                     [](const RunConfig& c) -> std::optional<std::string> { return c.output_directory; }});
        t.push_back({"output.formats",
                     [](RunConfig& c, const std::string& v) { c.output_formats = split_list(v); },
                     [](const RunConfig& c) -> std::optional<std::string> { return join(c.output_formats); }});
        return t;
    }();
    return table;
}

void require(bool ok, const char* key, const std::string& what) {
    if (!ok) throw ConfigError(what, key);
}

void check_invariants(RunConfig& c, bool kT_given) {
    if (c.temperature_kelvin) {
        require(c.units == UnitSystem::ev, "model.temperature_K", "requires mode.units = ev");
        require(!kT_given, "model.temperature_K", "conflicts with model.kT; give one of them");
        require(*c.temperature_kelvin >= 0.0, "model.temperature_K", "must be >= 0");
        c.model.kT = kBoltzmannEv * *c.temperature_kelvin;
    }
    c.model.validate();
    require(c.n_paths >= 2, "ensemble.n_paths", "must be >= 2");
    require(!c.bin_radius || *c.bin_radius > 0.0, "ensemble.bin_radius", "must be > 0");
    require(c.histogram_bins >= 0 && c.histogram_bins <= 100000, "ensemble.histogram_bins",
            "must be in [0, 100000] (0 = Freedman-Diaconis)");
    require(c.spectrum_segments >= 1, "spectrum.segments", "must be >= 1");
    require(c.spectrum_paths >= 1, "spectrum.paths", "must be >= 1");
    require(c.low_noise_threshold > 0.0, "thresholds.low_noise", "must be > 0");
    require(c.adiabatic_threshold > 0.0, "thresholds.adiabatic", "must be > 0");
    require(c.budget.n_paths >= 2, "validate.n_paths", "must be >= 2");
    require(c.budget.action_friction_scale > 0.0, "validate.action_friction_scale", "must be > 0");
    c.budget.low_noise_threshold = c.low_noise_threshold;
    c.budget.adiabatic_threshold = c.adiabatic_threshold;
    if (c.seed) c.budget.seed = *c.seed;
    if (c.sweep) {
        static const std::set<std::string> names{"kT", "hbar", "eta", "M", "duration"};
        require(names.count(c.sweep->parameter) == 1, "sweep.parameter", "expected one of kT, hbar, eta, M, duration");
        require(c.sweep->values.size() >= 2, "sweep.values", "needs at least two values");
        for (double v : c.sweep->values) require(v > 0.0, "sweep.values", "values must be > 0");
        c.sweep->low_noise_threshold = c.low_noise_threshold;
    }
    require(!c.output_directory.empty(), "output.directory", "must not be empty");
    require(!c.output_formats.empty(), "output.formats", "needs at least one of csv, json");
    for (const std::string& f : c.output_formats) {
        require(f == "csv" || f == "json", "output.formats", "unknown format '" + f + "' (expected csv, json)");
    }
}

}  // namespace

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const KeyHandler& h : handlers()) k.push_back(h.key);
        return k;
    }();
    return keys;
}

std::pair<std::string, std::string> split_assignment(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value', got '" + std::string(text) + "'");
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key in '" + std::string(text) + "'");
    return {std::move(key), std::move(value)};
}

RunConfig config_from_entries(const ConfigEntries& entries) {
    std::map<std::string, const KeyHandler*> index;
    for (const KeyHandler& h : handlers()) index.emplace(h.key, &h);

    RunConfig c;
    std::set<std::string> seen;
    for (const auto& [key, value] : entries) {
        const auto it = index.find(key);
        if (it == index.end()) throw ConfigError("unknown key", key);
        if (!seen.insert(key).second) throw ConfigError("key given more than once", key);
        if (value.empty()) throw ConfigError("missing value", key);
        it->second->set(c, value);
    }
    if (c.sweep && c.sweep->parameter.empty()) throw ConfigError("missing required key", "sweep.parameter");
    if (c.sweep && c.sweep->values.empty()) throw ConfigError("missing required key", "sweep.values");
    check_invariants(c, seen.count("model.kT") == 1);
    return c;
}

std::string_view library_version() noexcept { return GEOLANGEVIN_VERSION; }

ConfigEntries parse_entries(std::string_view text) {
    ConfigEntries entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        try {
            entries.push_back(split_assignment(line));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return entries;
}

RunConfig parse_config(std::string_view text) { return config_from_entries(parse_entries(text)); }

ConfigEntries config_entries(const RunConfig& config) {
    ConfigEntries out;
    for (const KeyHandler& h : handlers()) {
        if (auto v = h.get(config)) out.emplace_back(h.key, std::move(*v));
    }
    return out;
}

std::string serialize_config(const RunConfig& config) {
    std::string out;
    for (const auto& [key, value] : config_entries(config)) out += key + " = " + value + "\n";
    return out;
}

}  // namespace geolangevin
