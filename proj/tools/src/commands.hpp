#pragma once

#include <filesystem>

#include "config.hpp"

namespace constel::cli {

// Exit codes: 0 success, 2 config error, 3 scenario failure, 4 numerical guard.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitScenarioFailed = 3;
inline constexpr int kExitGuard = 4;

int cmd_design(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_pe(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_montecarlo(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_localize(const RunConfig& cfg, const std::filesystem::path& in,
                 const std::filesystem::path& out);
int cmd_synth_cloud(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_traveltime(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_compare_search(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_scenario(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_fly(const RunConfig& cfg, const std::filesystem::path& out);

/// Full rectangular lattice used by the pe/montecarlo sweeps: n_theta columns
/// centered on p_c, n_rho rows upward from it, synthetic channel ids.
Constellation make_lattice(int n_theta, int n_rho, const PolarPoint& p_c, double delta_theta_deg,
                           double delta_rho_m);

}  // namespace constel::cli
