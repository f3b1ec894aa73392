#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "constel/io.hpp"
#include "constel/random.hpp"

namespace constel::cli {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t effective_seed(const RunConfig& cfg) {
    if (cfg.seed) {
        return *cfg.seed;
    }
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

io::Metadata base_meta(const RunConfig& cfg, const char* command) {
    io::Metadata meta;
    meta["command"] = command;
    meta["config_hash"] = hash_hex(cfg.config_hash);
    return meta;
}

const DesignSection& need_design(const RunConfig& cfg) {
    if (!cfg.design) {
        throw ConfigError("$.design: section required by this command");
    }
    return *cfg.design;
}

DeltaPolicy delta_policy(const DesignSection& d) {
    if (d.xi) {
        return XiThreshold{*d.xi};
    }
    if (d.quotient_db) {
        return QuotientDb{*d.quotient_db};
    }
    return ExplicitDeltas{*d.delta_theta_deg, *d.delta_rho_m};
}

}  // namespace

Constellation make_lattice(int n_theta, int n_rho, const PolarPoint& p_c, double delta_theta_deg,
                           double delta_rho_m) {
    Constellation c;
    c.delta_theta_deg = delta_theta_deg;
    c.delta_rho_m = delta_rho_m;
    const double theta_lo = p_c.theta_deg - 0.5 * delta_theta_deg * (n_theta - 1);
    for (int it = 0; it < n_theta; ++it) {
        for (int ir = 0; ir < n_rho; ++ir) {
            c.symbols.push_back({theta_lo + it * delta_theta_deg, p_c.rho_m + ir * delta_rho_m});
            c.channel_mhz.push_back(900.0 + 5.0 * static_cast<double>(c.channel_mhz.size()));
        }
    }
    return c;
}

int cmd_design(const RunConfig& cfg, const std::filesystem::path& out) {
    const DesignSection& d = need_design(cfg);
    const DesignOutput result = design(d.channels_mhz, cfg.hover, delta_policy(d), d.p_c, d.mode,
                                       cfg.limits(), d.subset_budget, d.threads);
    io::Metadata meta = base_meta(cfg, "design");
    io::write_constellation_json(out, result.constellation, &result.report, meta);
    std::printf("designed %d symbols, mode=%s, delta_theta=%.6g deg, delta_rho=%.6g m, "
                "pe=%.6g, mean_pairwise=%.6g m -> %s\n",
                result.constellation.size(), to_string(result.report.mode),
                result.report.delta_theta_deg, result.report.delta_rho_m,
                result.report.pe_analytic, result.report.mean_pairwise_m, out.string().c_str());
    return kExitOk;
}

int cmd_pe(const RunConfig& cfg, const std::filesystem::path& out) {
    if (!cfg.pe) {
        throw ConfigError("$.pe: section required by this command");
    }
    const LatticeSection& s = *cfg.pe;
    std::string csv;
    for (const auto& [key, value] : base_meta(cfg, "pe")) {
        csv += "# " + key + "=" + value + "\n";
    }
    csv += "delta_theta_deg,delta_rho_m,n,pe_analytic\n";
    for (double dt : s.delta_theta_values_deg) {
        for (double dr : s.delta_rho_values_m) {
            const Constellation lattice = make_lattice(s.n_theta, s.n_rho, s.p_c, dt, dr);
            const double pe = constellation_error_probability(lattice, cfg.hover);
            csv += fmt(dt) + "," + fmt(dr) + "," + std::to_string(lattice.size()) + "," + fmt(pe) +
                   "\n";
        }
    }
    io::atomic_write_text(out, csv);
    return kExitOk;
}

int cmd_montecarlo(const RunConfig& cfg, const std::filesystem::path& out) {
    if (!cfg.montecarlo) {
        throw ConfigError("$.montecarlo: section required by this command");
    }
    const MonteCarloSection& s = *cfg.montecarlo;
    const std::uint64_t seed = effective_seed(cfg);
    io::Metadata meta = base_meta(cfg, "montecarlo");
    meta["seed"] = std::to_string(seed);
    meta["trials"] = std::to_string(s.trials);
    std::string csv;
    for (const auto& [key, value] : meta) {
        csv += "# " + key + "=" + value + "\n";
    }
    csv += "delta_theta_deg,delta_rho_m,n,trials,pe_mc,ci_half_width,pe_analytic\n";
    std::uint64_t row = 0;
    for (double dt : s.lattice.delta_theta_values_deg) {
        for (double dr : s.lattice.delta_rho_values_m) {
            const Constellation lattice =
                make_lattice(s.lattice.n_theta, s.lattice.n_rho, s.lattice.p_c, dt, dr);
            const double pe = constellation_error_probability(lattice, cfg.hover);
            const MonteCarloEstimate mc =
                monte_carlo_pe(lattice, cfg.hover, s.trials, splitmix64(seed ^ row), s.threads);
            csv += fmt(dt) + "," + fmt(dr) + "," + std::to_string(lattice.size()) + "," +
                   std::to_string(mc.trials) + "," + fmt(mc.pe) + "," + fmt(mc.ci_half_width) +
                   "," + fmt(pe) + "\n";
            ++row;
        }
    }
    io::atomic_write_text(out, csv);
    return kExitOk;
}

int cmd_localize(const RunConfig& cfg, const std::filesystem::path& in,
                 const std::filesystem::path& out) {
    const PointCloud cloud = io::read_point_cloud_csv(in);
    DbscanParams params = cfg.dbscan;
    params.dist_max_m = cfg.sensor.dist_max_m;
    if (params.min_pts <= 0) {
        double t_meas = cloud.t_meas_s;
        if (cfg.localize && cfg.localize->t_meas_s) {
            t_meas = *cfg.localize->t_meas_s;
        }
        if (!(t_meas > 0.0)) {
            throw ConfigError(
                "localize: min_pts auto-tuning needs a positive t_meas (cloud metadata or "
                "$.localize.t_meas_s)");
        }
        params.min_pts = compute_min_pts(cfg.dbscan_alpha, cfg.sensor, t_meas);
    }
    const std::vector<ObjectEstimate> estimates = localize(cloud, params, cfg.histogram);
    io::Metadata meta = base_meta(cfg, "localize");
    meta["input"] = in.string();
    meta["min_pts"] = std::to_string(params.min_pts);
    io::atomic_write_text(out, io::estimates_to_csv(estimates, meta));
    std::printf("localized %zu object(s) from %zu points -> %s\n", estimates.size(),
                cloud.points.size(), out.string().c_str());
    return kExitOk;
}

int cmd_synth_cloud(const RunConfig& cfg, const std::filesystem::path& out) {
    if (!cfg.synth_cloud) {
        throw ConfigError("$.synth_cloud: section required by this command");
    }
    const SynthCloudSection& s = *cfg.synth_cloud;
    const std::uint64_t seed = effective_seed(cfg);
    auto rng = make_rng(seed);
    const PointCloud cloud =
        synthesize_cloud(s.true_position, cfg.sensor, cfg.hover, s.t_meas_s, rng);
    io::Metadata meta = base_meta(cfg, "synth-cloud");
    meta["seed"] = std::to_string(seed);
    meta["true_theta_deg"] = fmt(s.true_position.theta_deg);
    meta["true_rho_m"] = fmt(s.true_position.rho_m);
    io::write_point_cloud_csv(out, cloud, meta);
    std::printf("synthesized %zu points -> %s\n", cloud.points.size(), out.string().c_str());
    return kExitOk;
}

int cmd_traveltime(const RunConfig& cfg, const std::filesystem::path& out) {
    if (!cfg.traveltime) {
        throw ConfigError("$.traveltime: section required by this command");
    }
    const TraveltimeSection& s = *cfg.traveltime;
    std::string csv;
    for (const auto& [key, value] : base_meta(cfg, "traveltime")) {
        csv += "# " + key + "=" + value + "\n";
    }
    csv += "n,log2_n,delta_theta_deg,delta_rho_m,mean_travel_time_s,mean_pairwise_distance_m\n";
    for (int n : s.n_values) {
        std::vector<double> channels;
        for (int i = 0; i < n; ++i) {
            channels.push_back(900.0 + 5.0 * i);
        }
        for (double dt : s.delta_theta_values_deg) {
            for (double dr : s.delta_rho_values_m) {
                const DesignOutput d = design(channels, cfg.hover, ExplicitDeltas{dt, dr}, s.p_c,
                                              s.mode, cfg.limits(), s.subset_budget, s.threads);
                const double t = mean_travel_time(d.constellation, cfg.pid, cfg.flight);
                csv += std::to_string(n) + "," + fmt(std::log2(static_cast<double>(n))) + "," +
                       fmt(dt) + "," + fmt(dr) + "," + fmt(t) + "," +
                       fmt(d.report.mean_pairwise_m) + "\n";
            }
        }
    }
    io::atomic_write_text(out, csv);
    return kExitOk;
}

int cmd_compare_search(const RunConfig& cfg, const std::filesystem::path& out) {
    if (!cfg.compare_search) {
        throw ConfigError("$.compare_search: section required by this command");
    }
    const CompareSearchSection& s = *cfg.compare_search;
    std::string csv;
    for (const auto& [key, value] : base_meta(cfg, "compare-search")) {
        csv += "# " + key + "=" + value + "\n";
    }
    csv += "n,delta_theta_deg,delta_rho_m,exhaustive_mean_m,heuristic_mean_m,ratio\n";
    for (int n : s.n_values) {
        const CandidateGrid grid =
            build_grid(s.p_c, n, s.delta_theta_deg, s.delta_rho_m, cfg.limits());
        const Selection ex = exhaustive_search(grid, n, s.subset_budget, s.threads);
        const Selection heur = heuristic_search(grid, n);
        const double ratio = ex.mean_pairwise_m > 0.0 ? heur.mean_pairwise_m / ex.mean_pairwise_m
                                                      : 1.0;
        csv += std::to_string(n) + "," + fmt(s.delta_theta_deg) + "," + fmt(s.delta_rho_m) + "," +
               fmt(ex.mean_pairwise_m) + "," + fmt(heur.mean_pairwise_m) + "," + fmt(ratio) + "\n";
    }
    io::atomic_write_text(out, csv);
    return kExitOk;
}

int cmd_scenario(const RunConfig& cfg, const std::filesystem::path& out) {
    if (!cfg.scenario) {
        throw ConfigError("$.scenario: section required by this command");
    }
    ScenarioConfig sc = cfg.scenario->scenario;
    if (cfg.scenario->constellation_file) {
        sc.constellation = io::read_constellation_json(*cfg.scenario->constellation_file);
    }
    sc.sensor = cfg.sensor;
    sc.hover = cfg.hover;
    sc.dbscan = cfg.dbscan;
    sc.dbscan.dist_max_m = cfg.sensor.dist_max_m;
    sc.dbscan_alpha = cfg.dbscan_alpha;
    sc.hist = cfg.histogram;
    sc.pid = cfg.pid;
    sc.flight = cfg.flight;
    sc.seed = effective_seed(cfg);

    const ScenarioResult result = run_scenario(sc);
    io::Metadata meta = base_meta(cfg, "scenario");
    meta["seed"] = std::to_string(sc.seed);
    io::atomic_write_text(out, io::timeline_to_csv(result, meta));
    const bool ok = result.status == ScenarioStatus::ok;
    std::printf("scenario %s: %zu windows, %zu events -> %s\n", ok ? "ok" : "FAILED",
                result.samples.size(), result.events.size(), out.string().c_str());
    return ok ? kExitOk : kExitScenarioFailed;
}

int cmd_fly(const RunConfig& cfg, const std::filesystem::path& out) {
    if (!cfg.fly) {
        throw ConfigError("$.fly: section required by this command");
    }
    const Trajectory traj = fly_to(cfg.fly->start, cfg.fly->target, cfg.pid, cfg.flight);
    io::Metadata meta = base_meta(cfg, "fly");
    io::atomic_write_text(out, io::trajectory_to_csv(traj, meta));
    std::printf("flew %.6g m in %.6g s -> %s\n",
                distance_m(cfg.fly->start, cfg.fly->target), traj.travel_time_s,
                out.string().c_str());
    return kExitOk;
}

}  // namespace constel::cli
