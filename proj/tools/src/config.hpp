#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "constel/designer.hpp"
#include "constel/error_model.hpp"
#include "constel/flight.hpp"
#include "constel/localization.hpp"
#include "constel/scenario.hpp"
#include "constel/sensor.hpp"

namespace constel::cli {

/// Invalid or malformed run configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DesignSection {
    std::vector<double> channels_mhz;
    PolarPoint p_c{0.0, 5.0};
    SearchMode mode = SearchMode::exhaustive;
    std::optional<double> xi;
    std::optional<double> quotient_db;
    std::optional<double> delta_theta_deg;
    std::optional<double> delta_rho_m;
    std::uint64_t subset_budget = 100'000'000ULL;
    int threads = 0;
};

struct LatticeSection {
    int n_theta = 1;
    int n_rho = 1;
    PolarPoint p_c{0.0, 6.0};
    std::vector<double> delta_theta_values_deg{1.0};
    std::vector<double> delta_rho_values_m{0.1};
};

struct MonteCarloSection {
    LatticeSection lattice;
    std::uint64_t trials = 1'000'000ULL;
    int threads = 0;
};

struct LocalizeSection {
    std::optional<double> t_meas_s;
};

struct SynthCloudSection {
    PolarPoint true_position{0.0, 6.0};
    double t_meas_s = 2.0;
};

struct TraveltimeSection {
    std::vector<int> n_values{2, 4, 8};
    std::vector<double> delta_theta_values_deg{5.0};
    std::vector<double> delta_rho_values_m{0.8};
    PolarPoint p_c{0.0, 5.0};
    SearchMode mode = SearchMode::heuristic;
    std::uint64_t subset_budget = 100'000'000ULL;
    int threads = 0;
};

struct CompareSearchSection {
    std::vector<int> n_values{2, 4, 8};
    double delta_theta_deg = 18.0;
    double delta_rho_m = 1.0;
    PolarPoint p_c{0.0, 5.0};
    std::uint64_t subset_budget = 100'000'000ULL;
    int threads = 0;
};

struct FlySection {
    PolarPoint start{0.0, 5.0};
    PolarPoint target{0.0, 6.0};
};

struct ScenarioSection {
    ScenarioConfig scenario;                // constellation filled from file or inline doc
    std::optional<std::string> constellation_file;
};

/// The validated run configuration: shared model sections plus per-command
/// sections, only present when the file provides them.
struct RunConfig {
    SensorModel sensor{};
    HoverModel hover{};
    DbscanParams dbscan{};
    double dbscan_alpha = 0.5;
    HistogramConfig histogram{};
    PidParams pid{};
    FlightConfig flight{};
    std::optional<std::uint64_t> seed;

    std::optional<DesignSection> design;
    std::optional<LatticeSection> pe;
    std::optional<MonteCarloSection> montecarlo;
    std::optional<LocalizeSection> localize;
    std::optional<SynthCloudSection> synth_cloud;
    std::optional<TraveltimeSection> traveltime;
    std::optional<CompareSearchSection> compare_search;
    std::optional<FlySection> fly;
    std::optional<ScenarioSection> scenario;

    std::uint64_t config_hash = 0;

    FieldOfView fov() const { return sensor.fov(); }
    DesignLimits limits() const { return {sensor.fov(), sensor.dist_max_m}; }
};

/// Parses, applies dotted-path overrides ("hover.sigma_rho_m=0.05"), validates
/// strictly (unknown keys are rejected), and hashes the effective document.
/// Throws ConfigError with file:line information where available.
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides);

/// Same, from an in-memory JSON document (used by tests).
RunConfig load_config_text(const std::string& text, const std::vector<std::string>& overrides,
                           const std::string& origin = "<config>");

std::string hash_hex(std::uint64_t hash);

}  // namespace constel::cli
