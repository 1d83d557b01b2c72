#include "app.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geolangevin/analytic.hpp"
#include "geolangevin/berry_phase.hpp"
#include "geolangevin/config.hpp"
#include "geolangevin/ensemble.hpp"
#include "geolangevin/errors.hpp"
#include "geolangevin/langevin.hpp"
#include "geolangevin/spectral.hpp"
#include "geolangevin/validation.hpp"
#include "manifest.hpp"

namespace geolangevin::cli {

namespace {

namespace fs = std::filesystem;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::vector<std::string> overrides;
};

void add_common(CLI::App& cmd, CommonArgs& args) {
    cmd.add_option("-c,--config", args.config_path, "Config document (flat dotted keys)");
    cmd.add_option("--seed", args.seed, "Master seed; overrides ensemble.seed");
    cmd.add_option("-o,--out", args.out_dir, "Output directory; overrides output.directory");
    cmd.add_option("--set", args.overrides, "Override one key, e.g. --set model.kT=2")->take_all();
}

RunConfig load_config(const CommonArgs& args) {
    ConfigEntries entries;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw ConfigError("cannot read config file '" + args.config_path + "'", "--config");
        std::stringstream text;
        text << in.rdbuf();
        entries = parse_entries(text.str());
    }
    auto put = [&entries](const std::string& key, const std::string& value) {
        for (auto& e : entries) {
            if (e.first == key) {
                e.second = value;
                return;
            }
        }
        entries.emplace_back(key, value);
    };
    for (const std::string& o : args.overrides) {
        const auto [key, value] = split_assignment(o);
        put(key, value);
    }
    if (args.seed) put("ensemble.seed", std::to_string(*args.seed));
    if (args.out_dir) put("output.directory", *args.out_dir);
    return config_from_entries(entries);
}

std::uint64_t require_seed(const RunConfig& config) {
    if (!config.seed) throw ConfigError("missing required key (or pass --seed)", "ensemble.seed");
    return *config.seed;
}

bool wants(const RunConfig& config, const std::string& format) {
    for (const std::string& f : config.output_formats) {
        if (f == format) return true;
    }
    return false;
}

fs::path prepare_output(const RunConfig& config) {
    const fs::path dir(config.output_directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw ConfigError("cannot create output directory '" + dir.string() + "'", "output.directory");
    }
    const fs::path probe = dir / ".write_probe";
    {
        std::ofstream p(probe);
        if (!p) throw ConfigError("output directory '" + dir.string() + "' is not writable", "output.directory");
    }
    fs::remove(probe, ec);
    return dir;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'", "output.directory");
    return out;
}

void write_manifest(const fs::path& dir, const Json& m) {
    std::ofstream out = open_output(dir / "manifest.json");
    out << m.dump(2) << '\n';
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
    const std::uint64_t seed = require_seed(config);
    const fs::path dir = prepare_output(config);
    SimulationOptions sim;
    sim.mode = config.force_mode;
    sim.initial_velocity = config.initial_velocity;
    sim.record_noise = true;
    RandomStream rng = RandomStream::substream(seed, 0);
    const Trajectory traj = simulate(config.model, sim, rng);
    const PhaseResult phase = accumulate_phase(traj);
    if (wants(config, "csv")) {
        std::ofstream csv = open_output(dir / "trajectory.csv");
        write_trajectory_csv(csv, traj);
    }
    Json results;
    results["steps"] = traj.states.size() - 1;
    results["puncture_events"] = traj.puncture_events;
    results["endpoint"] = {traj.states.back().r.x, traj.states.back().r.y};
    results["gamma"] = phase.gamma;
    results["delta_e"] = phase.shift;
    results["closed"] = phase.closed;
    if (wants(config, "json")) write_manifest(dir, manifest(config, "simulate", results));
    out << "simulate: " << traj.states.size() << " samples, deltaE = " << num(phase.shift) << " -> "
        << dir.string() << '\n';
    return kExitOk;
}

EnsembleOptions ensemble_options(const RunConfig& config, std::uint64_t seed) {
    EnsembleOptions o;
    o.n_paths = config.n_paths;
    o.seed = seed;
    o.simulation.mode = config.force_mode;
    o.simulation.initial_velocity = config.initial_velocity;
    o.conditioning = config.conditioning;
    o.bin_radius = config.bin_radius;
    o.histogram_bins = config.histogram_bins;
    return o;
}

int cmd_ensemble(const RunConfig& config, std::ostream& out) {
    const std::uint64_t seed = require_seed(config);
    const fs::path dir = prepare_output(config);
    const EnsembleOptions opts = ensemble_options(config, seed);
    Json results;
    if (config.sweep) {
        const ScalingTable table = scaling_study(config.model, *config.sweep, opts);
        if (wants(config, "csv")) {
            std::ofstream csv = open_output(dir / "scaling.csv");
            csv << "value,low_noise,margin,sigma_mc,mean_mc,std_err_mean,sigma_analytic,sigma_simplified,mean_shift\n";
            for (const ScalingRow& r : table.rows) {
                csv << num(r.value) << ',' << (r.low_noise ? 1 : 0) << ',' << num(r.margin) << ',' << num(r.sigma_mc)
                    << ',' << num(r.mean_mc) << ',' << num(r.std_err_mean) << ',' << num(r.sigma_analytic) << ','
                    << num(r.sigma_simplified) << ',' << num(r.mean_shift) << '\n';
            }
        }
        results["scaling"] = to_json(table);
        out << "sweep over " << table.sweep.parameter << ": sigma exponent " << num(table.sigma_fit.exponent) << " ["
            << num(table.sigma_fit.ci_low) << ", " << num(table.sigma_fit.ci_high) << "]\n";
    } else {
        const ShiftEnsemble e = run_ensemble(config.model, opts);
        if (wants(config, "csv")) {
            std::ofstream csv = open_output(dir / "samples.csv");
            write_samples_csv(csv, e);
            std::ofstream hist = open_output(dir / "histogram.csv");
            hist << "left,right,count\n";
            for (std::size_t i = 0; i < e.histogram.counts.size(); ++i) {
                hist << num(e.histogram.edges[i]) << ',' << num(e.histogram.edges[i + 1]) << ','
                     << e.histogram.counts[i] << '\n';
            }
        }
        results["ensemble"] = to_json(e);
        out << "ensemble: mean deltaE = " << num(e.mean) << " +- " << num(e.std_err_mean) << ", std "
            << num(std::sqrt(e.variance)) << " over " << e.n_retained << " paths\n";
    }
    const Predictions p = predict(config.model, config.low_noise_threshold);
    results["predictions"] = to_json(p, adiabaticity_check(config.model, config.adiabatic_threshold));
    if (wants(config, "json")) write_manifest(dir, manifest(config, "ensemble", results));
    return kExitOk;
}

int cmd_spectrum(const RunConfig& config, std::ostream& out) {
    const std::uint64_t seed = require_seed(config);
    const fs::path dir = prepare_output(config);
    SimulationOptions sim;
    sim.mode = config.force_mode;
    sim.initial_velocity = config.initial_velocity;
    sim.record_noise = config.spectrum_signal == SignalKind::force;
    std::vector<Spectrum> spectra(config.spectrum_paths);
    parallel_for(config.spectrum_paths, resolve_threads(0), [&](std::size_t i) {
        RandomStream rng = RandomStream::substream(seed, i);
        const Trajectory traj = simulate(config.model, sim, rng);
        spectra[i] = periodogram(traj, config.spectrum_signal, config.spectrum_segments);
    });
    const Spectrum mean = average(spectra);
    if (wants(config, "csv")) {
        std::ofstream csv = open_output(dir / "spectrum.csv");
        write_spectrum_csv(csv, mean);
    }
    Json results;
    results["signal"] = to_string(mean.kind);
    results["paths"] = config.spectrum_paths;
    results["segments"] = config.spectrum_segments;
    results["bins"] = mean.omega.size();
    if (!mean.omega.empty()) {
        results["omega_min"] = mean.omega.front();
        results["omega_max"] = mean.omega.back();
    }
    results["mean_square"] = mean.mean_square();
    if (wants(config, "json")) write_manifest(dir, manifest(config, "spectrum", results));
    out << "spectrum: " << mean.omega.size() << " bins of " << to_string(mean.kind) << " -> " << dir.string() << '\n';
    return kExitOk;
}

int cmd_predict(const RunConfig& config, std::ostream& out) {
    const Predictions p = predict(config.model, config.low_noise_threshold);
    out << to_json(p, adiabaticity_check(config.model, config.adiabatic_threshold)).dump(2) << '\n';
    return kExitOk;
}

int cmd_validate(const RunConfig& config, std::ostream& out) {
    require_seed(config);
    const fs::path dir = prepare_output(config);
    const ValidationReport report = validate(config.model, config.budget);
    for (const CheckResult& c : report.checks) {
        out << std::left << std::setw(26) << c.name << std::setw(8) << to_string(c.status) << " measured "
            << num(c.measured) << "  expected " << num(c.expected) << "  tol " << num(c.tolerance) << '\n';
    }
    out << (report.passed() ? "all checks passed\n" : "some checks FAILED\n");
    if (wants(config, "json")) write_manifest(dir, manifest(config, "validate", to_json(report)));
    return report.passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stochastic geometric-phase Langevin simulator"};
    app.set_version_flag("--version", std::string(library_version()));
    app.require_subcommand(1);

    struct Command {
        const char* name;
        const char* help;
        int (*fn)(const RunConfig&, std::ostream&);
    };
    const Command commands[] = {
        {"simulate", "Simulate one path and write trajectory.csv", cmd_simulate},
        {"ensemble", "Run an ensemble (or a parameter sweep) of level shifts", cmd_ensemble},
        {"spectrum", "Averaged spectral estimate of one signal", cmd_spectrum},
        {"predict", "Print the closed-form predictions as JSON", cmd_predict},
        {"validate", "Run the validation battery; exit 1 if any check fails", cmd_validate},
    };
    std::vector<CommonArgs> args(std::size(commands));
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        CLI::App* sub = app.add_subcommand(commands[i].name, commands[i].help);
        add_common(*sub, args[i]);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfigError;
    }

    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (!subs[i]->parsed()) continue;
        try {
            const RunConfig config = load_config(args[i]);
            return commands[i].fn(config, out);
        } catch (const ConfigError& e) {
            err << "config error: " << e.what() << '\n';
            return kExitConfigError;
        } catch (const EmptyEnsembleError& e) {
            err << "error: " << e.what() << " (" << e.endpoints().size() << " endpoints recorded)\n";
            return kExitCheckFailed;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kExitCheckFailed;
        }
    }
    return kExitConfigError;
}

}  // namespace geolangevin::cli
