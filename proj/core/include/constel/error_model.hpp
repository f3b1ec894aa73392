#pragma once

#include <cstdint>

#include "constel/constellation.hpp"

namespace constel {

/// Per-axis standard deviations of the Gaussian position error of a hovering
/// UAV around its commanded point. Defaults are the RTK-grade values.
struct HoverModel {
    double sigma_theta_deg = 0.9;
    double sigma_rho_m = 0.05;
};

/// Lattice-neighbor counts of one symbol along each axis, each in {0, 1, 2}.
struct NeighborProfile {
    int n_theta = 0;
    int n_rho = 0;
};

/// Decision region of one symbol: a rectangle in theta x rho with boundaries at
/// the midpoints toward existing lattice neighbors; open sides extend to infinity.
struct SymbolRegion {
    double theta_low_deg;
    double theta_high_deg;
    double rho_low_m;
    double rho_high_m;

    bool contains(const PolarPoint& p) const {
        return p.theta_deg > theta_low_deg && p.theta_deg < theta_high_deg &&
               p.rho_m > rho_low_m && p.rho_m < rho_high_m;
    }
};

/// Upper-tail probability of the standard normal distribution.
double q_function(double x);

/// Counts symbols at exactly +-delta_theta (same rho) and +-delta_rho (same
/// theta) from symbol_index. Throws if the constellation is off-lattice.
NeighborProfile neighbor_counts(const Constellation& c, int symbol_index);

SymbolRegion symbol_region(const Constellation& c, int symbol_index);

/// Per-symbol error probability for a neighbor profile: the probability that a
/// Gaussian hover displacement leaves the symbol's own region. Theta terms use
/// sigma_theta, rho terms sigma_rho. Profile (0,0) has no boundary to cross.
double symbol_error_probability(const NeighborProfile& profile, double delta_theta_deg,
                                double delta_rho_m, const HoverModel& hover);

/// Average of the per-symbol error probabilities, symbols equiprobable.
double constellation_error_probability(const Constellation& c, const HoverModel& hover);

struct MonteCarloEstimate {
    double pe = 0.0;
    double ci_half_width = 0.0;  // 95% Wald interval
    std::uint64_t trials = 0;
    std::uint64_t misses = 0;
};

/// Empirical region-miss rate: per trial, pick a symbol uniformly, displace it
/// by the hover Gaussian, and count landings outside the symbol's own region.
/// Trials are processed in fixed-size blocks with per-block seeds derived from
/// the master seed, so the result is independent of the worker count.
MonteCarloEstimate monte_carlo_pe(const Constellation& c, const HoverModel& hover,
                                  std::uint64_t trials, std::uint64_t seed, int threads = 0);

}  // namespace constel
