#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "constel/constellation.hpp"
#include "constel/error_model.hpp"

namespace constel {

/// Candidate lattice of L = N^2 points around a start point p_c. Theta values
/// are centered on p_c, rho values extend upward from it. Candidates are stored
/// theta-major: index = i_theta * N + i_rho.
struct CandidateGrid {
    PolarPoint center;
    int n = 0;
    double delta_theta_deg = 0.0;
    double delta_rho_m = 0.0;
    std::vector<PolarPoint> candidates;
};

struct DesignLimits {
    FieldOfView fov{};
    double dist_max_m = 12.0;
};

/// A chosen symbol set, recentered in theta so its centroid sits on the grid center.
struct Selection {
    std::vector<PolarPoint> symbols;  // in candidate-index order
    double mean_pairwise_m = 0.0;
};

/// Smallest spacings whose worst-case per-symbol error stays below xi. The xi
/// budget is split equally across the two axes (additively, so an axis with n
/// neighbors gets Q target (xi/2)/n); each axis is then solved by bisection to
/// 1e-6 relative tolerance.
std::pair<double, double> solve_deltas(const HoverModel& hover, double xi,
                                       const NeighborProfile& worst_profile = {2, 2});

/// Spacings from a fixed spacing-to-sigma quotient expressed in dB:
/// delta = sigma * 10^(db/10) per axis.
std::pair<double, double> deltas_from_quotient_db(const HoverModel& hover, double quotient_db);

CandidateGrid build_grid(const PolarPoint& p_c, int n, double delta_theta_deg,
                         double delta_rho_m, const DesignLimits& limits);

/// True subset enumeration over all C(L, n) candidate subsets, minimizing the
/// mean pairwise chord distance; ties break toward the lexicographically
/// smallest candidate-index subset. Refuses when C(L, n) exceeds the budget
/// (throws guard_error advising heuristic_search). Deterministic for any
/// worker count.
Selection exhaustive_search(const CandidateGrid& grid, int n,
                            std::uint64_t subset_budget = 100'000'000ULL, int threads = 0);

/// One pass over the grid: picks the n candidates closest to the grid center
/// (ties toward the lower candidate index). O(L).
Selection heuristic_search(const CandidateGrid& grid, int n);

enum class SearchMode { exhaustive, heuristic };

/// How the spacings are chosen in design().
struct XiThreshold {
    double xi;
    NeighborProfile worst_profile = {2, 2};
};
struct QuotientDb {
    double db;
};
struct ExplicitDeltas {
    double delta_theta_deg;
    double delta_rho_m;
};
using DeltaPolicy = std::variant<XiThreshold, QuotientDb, ExplicitDeltas>;

struct DesignReport {
    double pe_analytic = 0.0;
    double mean_pairwise_m = 0.0;
    double delta_theta_deg = 0.0;
    double delta_rho_m = 0.0;
    SearchMode mode = SearchMode::exhaustive;
    std::optional<double> xi;
};

struct DesignOutput {
    Constellation constellation;
    DesignReport report;
};

/// Full pipeline: spacing selection, candidate grid, subset search, exact
/// error-probability verification on the selected layout, channel assignment
/// by symbol index order.
DesignOutput design(const std::vector<double>& channels_mhz, const HoverModel& hover,
                    const DeltaPolicy& policy, const PolarPoint& p_c, SearchMode mode,
                    const DesignLimits& limits, std::uint64_t subset_budget = 100'000'000ULL,
                    int threads = 0);

const char* to_string(SearchMode mode);
SearchMode search_mode_from_string(const std::string& s);

}  // namespace constel
