#include "geolangevin/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "geolangevin/errors.hpp"

namespace geolangevin {

std::string_view to_string(ForceMode mode) noexcept {
    return mode == ForceMode::full ? "full" : "simplified";
}

ForceMode force_mode_from_string(std::string_view text) {
    if (text == "simplified") return ForceMode::simplified;
    if (text == "full") return ForceMode::full;
    throw ConfigError("unknown force mode '" + std::string(text) + "' (expected simplified|full)");
}

double ModelParams::epsilon() const noexcept {
    return puncture_radius ? *puncture_radius : 1e-3 * mean_radius();
}

std::size_t ModelParams::steps() const noexcept {
    return static_cast<std::size_t>(std::llround(duration / dt));
}

double ModelParams::omega_c() const noexcept { return std::numbers::pi / duration; }

double ModelParams::omega_b() const noexcept {
    if (kT <= 0.0) return noise_band_cap;
    return std::min(std::sqrt(6.0) * kT / hbar, noise_band_cap);
}

namespace {

void require(bool ok, const char* key, const std::string& what) {
    if (!ok) throw ConfigError(what, key);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void ModelParams::validate() const {
    require(finite(mass) && mass > 0.0, "model.M", "must be > 0");
    require(finite(friction) && friction > 0.0, "model.eta", "must be > 0");
    require(finite(coupling) && coupling > 0.0, "model.g", "must be > 0");
    require(finite(kT) && kT >= 0.0, "model.kT", "must be >= 0");
    require(finite(hbar) && hbar > 0.0, "model.hbar", "must be > 0");
    require(finite(duration) && duration > 0.0, "model.duration", "must be > 0");
    require(finite(dt) && dt > 0.0, "model.dt", "must be > 0");
    require(finite(start.x) && finite(start.y), "model.start_x", "must be finite");
    require(finite(end.x) && finite(end.y), "model.end_x", "must be finite");
    if (puncture_radius) {
        require(finite(*puncture_radius) && *puncture_radius > 0.0, "model.puncture_radius",
                "must be > 0");
    }
    const double eps = epsilon();
    require(eps > 0.0, "model.puncture_radius", "mean point (R_i + R_f)/2 is the origin; set it explicitly");
    require(norm(start) > eps, "model.start_x", "start point lies inside the puncture disc");
    require(norm(end) > eps, "model.end_x", "end point lies inside the puncture disc");
    const double n = duration / dt;
    require(steps() >= 2 && std::abs(n - std::round(n)) <= 1e-9 * n, "model.dt",
            "duration must be an integer multiple (>= 2) of dt");
    require(!(noise_band_cap <= 0.0), "model.noise_band_cap", "must be > 0");
    require(omega_c() < omega_b(), "model.noise_band_cap",
            "noise band omega_b = min(sqrt(6) kT/hbar, cap) must exceed omega_c = pi/duration");
}

}  // namespace geolangevin
