#include "manifest.hpp"

#include <cmath>

#include "geolangevin/errors.hpp"

namespace geolangevin::cli {

Json manifest(const RunConfig& config, const std::string& command, Json results) {
    Json m;
    m["schema_version"] = kSchemaVersion;
    m["tool"] = "geo_langevin";
    m["version"] = std::string(library_version());
    m["command"] = command;
    m["seed"] = config.seed ? Json(*config.seed) : Json(nullptr);
    Json cfg = Json::object();
    for (const auto& [key, value] : config_entries(config)) cfg[key] = value;
    m["config"] = std::move(cfg);
    m["results"] = std::move(results);
    return m;
}

RunConfig config_from_manifest(const Json& manifest) {
    if (!manifest.contains("schema_version") || manifest["schema_version"] != kSchemaVersion) {
        throw ConfigError("unsupported manifest schema_version", "schema_version");
    }
    ConfigEntries entries;
    for (const auto& [key, value] : manifest.at("config").items()) entries.emplace_back(key, value.get<std::string>());
    return config_from_entries(entries);
}

Json to_json(const Predictions& p, const AdiabaticityReport& a) {
    Json j;
    j["mean_shift"] = p.mean_shift;
    j["sigma"] = p.sigma;
    j["sigma_simplified"] = p.sigma_simplified;
    j["kappa"] = p.kappa;
    j["low_noise_margin"] = p.low_noise_margin;
    j["low_noise"] = p.low_noise;
    j["x_c"] = p.x_c;
    j["x_b"] = p.x_b;
    j["adiabatic_ratio"] = a.ratio;
    j["adiabatic"] = a.ok;
    return j;
}

Json to_json(const ValidationReport& report) {
    Json checks = Json::array();
    for (const CheckResult& c : report.checks) {
        Json j;
        j["name"] = c.name;
        j["status"] = to_string(c.status);
        j["measured"] = c.measured;
        j["expected"] = c.expected;
        j["tolerance"] = c.tolerance;
        j["detail"] = c.detail;
        checks.push_back(std::move(j));
    }
    Json j;
    j["passed"] = report.passed();
    j["checks"] = std::move(checks);
    return j;
}

Json to_json(const ShiftEnsemble& e) {
    Json j;
    j["conditioning"] = to_string(e.conditioning);
    if (e.conditioning == Conditioning::endpoint_binned) j["bin_radius"] = e.bin_radius;
    j["n_paths"] = e.samples.size();
    j["n_retained"] = e.n_retained;
    j["n_aborted"] = e.n_aborted;
    j["mean"] = e.mean;
    j["std"] = std::sqrt(e.variance);
    j["std_err_mean"] = e.std_err_mean;
    j["accepted_fraction"] = e.accepted_fraction;
    j["abort_fraction"] = e.abort_fraction;
    j["histogram"] = {{"edges", e.histogram.edges}, {"counts", e.histogram.counts}};
    return j;
}

namespace {

Json fit_json(const PowerLawFit& f) {
    return {{"exponent", f.exponent}, {"ci_low", f.ci_low}, {"ci_high", f.ci_high}, {"points", f.points}};
}

}  // namespace

Json to_json(const ScalingTable& t) {
    Json rows = Json::array();
    for (const ScalingRow& r : t.rows) {
        rows.push_back({{"value", r.value},
                        {"low_noise", r.low_noise},
                        {"margin", r.margin},
                        {"sigma_mc", r.sigma_mc},
                        {"mean_mc", r.mean_mc},
                        {"std_err_mean", r.std_err_mean},
                        {"sigma_analytic", r.sigma_analytic},
                        {"sigma_simplified", r.sigma_simplified},
                        {"mean_shift", r.mean_shift}});
    }
    Json j;
    j["parameter"] = t.sweep.parameter;
    j["tie_endpoints"] = t.sweep.tie_endpoints_to_diffusion;
    j["rows"] = std::move(rows);
    j["sigma_fit"] = fit_json(t.sigma_fit);
    j["mean_fit"] = fit_json(t.mean_fit);
    j["analytic_fit"] = fit_json(t.analytic_fit);
    return j;
}

}  // namespace geolangevin::cli
