#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "constel/errors.hpp"
#include "constel/io.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string in_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_in = false) {
    cmd->add_option("-c,--config", args.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("-s,--set", args.overrides,
                    "Override a config value by dotted path, e.g. hover.sigma_rho_m=0.05");
    cmd->add_option("-o,--out", args.out_path, "Output file")->required();
    if (needs_in) {
        cmd->add_option("-i,--in", args.in_path, "Input point-cloud CSV")
            ->required()
            ->check(CLI::ExistingFile);
    }
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&args](std::uint64_t v) { args.seed = v; args.seed_given = true; },
        "Random seed (overrides the config's seed field)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constel: UAV spatial-constellation design and evaluation"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* design = app.add_subcommand("design", "Design a constellation and write it to a file");
    add_common(design, args);
    auto* pe = app.add_subcommand("pe", "Analytic symbol-error probability over a spacing sweep");
    add_common(pe, args);
    auto* montecarlo =
        app.add_subcommand("montecarlo", "Empirical symbol-error probability with a 95% CI");
    add_common(montecarlo, args);
    auto* localize =
        app.add_subcommand("localize", "Cluster a point-cloud CSV and emit position estimates");
    add_common(localize, args, /*needs_in=*/true);
    auto* synth = app.add_subcommand("synth-cloud", "Synthesize a radar point-cloud CSV");
    add_common(synth, args);
    auto* traveltime =
        app.add_subcommand("traveltime", "Mean inter-symbol travel time over an N/spacing sweep");
    add_common(traveltime, args);
    auto* compare = app.add_subcommand("compare-search",
                                       "Exhaustive vs heuristic mean pairwise distance per N");
    add_common(compare, args);
    auto* scenario =
        app.add_subcommand("scenario", "End-to-end jamming / channel-switch timeline");
    add_common(scenario, args);
    auto* fly = app.add_subcommand("fly", "Simulate one flight leg and export the trajectory");
    add_common(fly, args);

    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<std::string> overrides = args.overrides;
        if (args.seed_given) {
            overrides.push_back("seed=" + std::to_string(args.seed));
        }
        const constel::cli::RunConfig cfg = constel::cli::load_config(args.config_path, overrides);

        if (design->parsed()) return constel::cli::cmd_design(cfg, args.out_path);
        if (pe->parsed()) return constel::cli::cmd_pe(cfg, args.out_path);
        if (montecarlo->parsed()) return constel::cli::cmd_montecarlo(cfg, args.out_path);
        if (localize->parsed())
            return constel::cli::cmd_localize(cfg, args.in_path, args.out_path);
        if (synth->parsed()) return constel::cli::cmd_synth_cloud(cfg, args.out_path);
        if (traveltime->parsed()) return constel::cli::cmd_traveltime(cfg, args.out_path);
        if (compare->parsed()) return constel::cli::cmd_compare_search(cfg, args.out_path);
        if (scenario->parsed()) return constel::cli::cmd_scenario(cfg, args.out_path);
        if (fly->parsed()) return constel::cli::cmd_fly(cfg, args.out_path);
        std::fprintf(stderr, "no subcommand\n");
        return 1;
    } catch (const constel::cli::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return constel::cli::kExitConfig;
    } catch (const constel::io::parse_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return constel::cli::kExitConfig;
    } catch (const constel::guard_error& e) {
        std::fprintf(stderr, "guard tripped: %s\n", e.what());
        return constel::cli::kExitGuard;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return constel::cli::kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
