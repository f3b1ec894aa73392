#include "constel/designer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "constel/errors.hpp"

namespace constel {

namespace {

// Smallest x with q_function(x) <= target, bisected to 1e-6 relative tolerance.
double q_inverse_upper(double target) {
    if (target >= 0.5) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (q_function(hi) > target) {
        hi *= 2.0;
        if (hi > 1024.0) {
            throw std::invalid_argument("solve_deltas: threshold too small to represent");
        }
    }
    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (q_function(mid) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

std::vector<PolarPoint> recenter_theta(std::vector<PolarPoint> symbols, double theta_c) {
    double mean = 0.0;
    for (const PolarPoint& s : symbols) {
        mean += s.theta_deg;
    }
    mean /= static_cast<double>(symbols.size());
    const double shift = theta_c - mean;
    for (PolarPoint& s : symbols) {
        s.theta_deg += shift;
    }
    return symbols;
}

double binomial_count_capped(int l, int n) {
    double c = 1.0;
    for (int k = 1; k <= n; ++k) {
        c *= static_cast<double>(l - n + k) / static_cast<double>(k);
        if (c > 1e18) {
            return 1e18;
        }
    }
    return c;
}

struct BestSubset {
    double sum = std::numeric_limits<double>::infinity();
    std::vector<int> idx;

    void offer(double s, const int* chosen, int n) {
        if (s < sum) {
            sum = s;
            idx.assign(chosen, chosen + n);
        }
    }
};

// Depth-first enumeration of all increasing n-tuples starting at a fixed first
// index. Pair sums accumulate through per-depth rows acc[d][j] = sum of
// distances from the first d+1 chosen candidates to candidate j; rows are only
// maintained up to depth n-3, the last two levels read them directly.
class SubsetEnumerator {
public:
    SubsetEnumerator(const std::vector<double>& dist, int l, int n)
        : dist_(dist), l_(l), n_(n), chosen_(n) {
        if (n_ >= 3) {
            acc_.assign(n_ - 2, std::vector<double>(l_));
        }
    }

    void run(int first, BestSubset& best) {
        best_ = &best;
        chosen_[0] = first;
        if (n_ == 1) {
            best_->offer(0.0, chosen_.data(), 1);
            return;
        }
        if (n_ == 2) {
            const double* row = dist_.data() + static_cast<std::size_t>(first) * l_;
            for (int j = first + 1; j < l_; ++j) {
                chosen_[1] = j;
                best_->offer(row[j], chosen_.data(), 2);
            }
            return;
        }
        std::copy_n(dist_.data() + static_cast<std::size_t>(first) * l_, l_, acc_[0].begin());
        descend(1, 0.0);
    }

private:
    void descend(int depth, double partial) {
        const int prev = chosen_[depth - 1];
        if (depth == n_ - 1) {
            const double* acc_row = acc_[n_ - 3].data();
            const double* dist_row = dist_.data() + static_cast<std::size_t>(prev) * l_;
            for (int j = prev + 1; j < l_; ++j) {
                chosen_[depth] = j;
                best_->offer(partial + acc_row[j] + dist_row[j], chosen_.data(), n_);
            }
            return;
        }
        const std::vector<double>& acc_prev = acc_[depth - 1];
        const int last_start = l_ - (n_ - 1 - depth);
        for (int j = prev + 1; j < last_start; ++j) {
            chosen_[depth] = j;
            if (depth <= n_ - 3) {
                const double* dist_row = dist_.data() + static_cast<std::size_t>(j) * l_;
                std::vector<double>& acc_next = acc_[depth];
                for (int m = 0; m < l_; ++m) {
                    acc_next[m] = acc_prev[m] + dist_row[m];
                }
            }
            descend(depth + 1, partial + acc_prev[j]);
        }
    }

    const std::vector<double>& dist_;
    int l_;
    int n_;
    std::vector<int> chosen_;
    std::vector<std::vector<double>> acc_;
    BestSubset* best_ = nullptr;
};

Selection selection_from_indices(const CandidateGrid& grid, const std::vector<int>& indices) {
    std::vector<PolarPoint> symbols;
    symbols.reserve(indices.size());
    for (int i : indices) {
        symbols.push_back(grid.candidates[i]);
    }
    symbols = recenter_theta(std::move(symbols), grid.center.theta_deg);
    return {symbols, mean_pairwise_distance_m(symbols)};
}

}  // namespace

std::pair<double, double> solve_deltas(const HoverModel& hover, double xi,
                                       const NeighborProfile& worst_profile) {
    if (!(xi > 0.0) || xi >= 1.0) {
        throw std::invalid_argument("solve_deltas: xi must lie in (0, 1)");
    }
    const bool theta_active = worst_profile.n_theta > 0;
    const bool rho_active = worst_profile.n_rho > 0;
    if (!theta_active && !rho_active) {
        throw std::invalid_argument("solve_deltas: profile (0,0) places no constraint on spacing");
    }
    const double per_axis_budget = (theta_active && rho_active) ? 0.5 * xi : xi;
    auto solve_axis = [&](int n_neighbors, double sigma) {
        if (n_neighbors == 0) {
            return 0.0;
        }
        return 2.0 * sigma * q_inverse_upper(per_axis_budget / n_neighbors);
    };
    const double dt = solve_axis(worst_profile.n_theta, hover.sigma_theta_deg);
    const double dr = solve_axis(worst_profile.n_rho, hover.sigma_rho_m);
    return {dt, dr};
}

std::pair<double, double> deltas_from_quotient_db(const HoverModel& hover, double quotient_db) {
    const double quotient = std::pow(10.0, quotient_db / 10.0);
    return {hover.sigma_theta_deg * quotient, hover.sigma_rho_m * quotient};
}

CandidateGrid build_grid(const PolarPoint& p_c, int n, double delta_theta_deg,
                         double delta_rho_m, const DesignLimits& limits) {
    if (n < 1) {
        throw std::invalid_argument("build_grid: n must be >= 1");
    }
    if (n > 1 && (!(delta_theta_deg > 0.0) || !(delta_rho_m > 0.0))) {
        throw std::invalid_argument("build_grid: spacings must be positive");
    }
    const double theta_lo = p_c.theta_deg - 0.5 * delta_theta_deg * (n - 1);
    const double theta_hi = p_c.theta_deg + 0.5 * delta_theta_deg * (n - 1);
    const double rho_lo = p_c.rho_m;
    const double rho_hi = p_c.rho_m + delta_rho_m * (n - 1);
    if (theta_lo < limits.fov.min_deg || theta_hi > limits.fov.max_deg) {
        throw std::invalid_argument("build_grid: theta range [" + std::to_string(theta_lo) + ", " +
                                    std::to_string(theta_hi) + "] deg escapes the field of view [" +
                                    std::to_string(limits.fov.min_deg) + ", " +
                                    std::to_string(limits.fov.max_deg) + "]");
    }
    if (rho_lo < 0.0 || rho_hi > limits.dist_max_m) {
        throw std::invalid_argument("build_grid: rho range [" + std::to_string(rho_lo) + ", " +
                                    std::to_string(rho_hi) + "] m escapes [0, " +
                                    std::to_string(limits.dist_max_m) + "]");
    }

    CandidateGrid grid;
    grid.center = p_c;
    grid.n = n;
    grid.delta_theta_deg = delta_theta_deg;
    grid.delta_rho_m = delta_rho_m;
    grid.candidates.reserve(static_cast<std::size_t>(n) * n);
    for (int it = 0; it < n; ++it) {
        for (int ir = 0; ir < n; ++ir) {
            grid.candidates.push_back(
                {theta_lo + it * delta_theta_deg, rho_lo + ir * delta_rho_m});
        }
    }
    return grid;
}

Selection exhaustive_search(const CandidateGrid& grid, int n, std::uint64_t subset_budget,
                            int threads) {
    const int l = static_cast<int>(grid.candidates.size());
    if (n < 1 || n > l) {
        throw std::invalid_argument("exhaustive_search: need 1 <= n <= L");
    }
    const double subsets = binomial_count_capped(l, n);
    if (subsets > static_cast<double>(subset_budget)) {
        throw guard_error("exhaustive_search: C(" + std::to_string(l) + ", " + std::to_string(n) +
                          ") = " + std::to_string(subsets) + " subsets exceeds the budget of " +
                          std::to_string(subset_budget) + "; use heuristic_search instead");
    }

    std::vector<double> dist(static_cast<std::size_t>(l) * l, 0.0);
    for (int i = 0; i < l; ++i) {
        for (int j = i + 1; j < l; ++j) {
            const double d = distance_m(grid.candidates[i], grid.candidates[j]);
            dist[static_cast<std::size_t>(i) * l + j] = d;
            dist[static_cast<std::size_t>(j) * l + i] = d;
        }
    }

    const int first_max = l - n;  // last admissible first index
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, first_max + 1);

    // One result slot per first index; merged in index order afterwards so the
    // lexicographic tie-break is independent of the thread schedule.
    std::vector<BestSubset> per_first(first_max + 1);
    std::atomic<int> next_first{0};
    auto worker = [&]() {
        SubsetEnumerator enumerator(dist, l, n);
        for (;;) {
            const int first = next_first.fetch_add(1);
            if (first > first_max) {
                return;
            }
            enumerator.run(first, per_first[first]);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    const BestSubset* best = nullptr;
    for (const BestSubset& b : per_first) {
        if (!b.idx.empty() && (best == nullptr || b.sum < best->sum)) {
            best = &b;
        }
    }
    return selection_from_indices(grid, best->idx);
}

Selection heuristic_search(const CandidateGrid& grid, int n) {
    const int l = static_cast<int>(grid.candidates.size());
    if (n < 1 || n > l) {
        throw std::invalid_argument("heuristic_search: need 1 <= n <= L");
    }
    std::vector<std::pair<double, int>> by_distance(l);
    for (int i = 0; i < l; ++i) {
        by_distance[i] = {distance_m(grid.center, grid.candidates[i]), i};
    }
    std::sort(by_distance.begin(), by_distance.end());
    std::vector<int> indices(n);
    for (int k = 0; k < n; ++k) {
        indices[k] = by_distance[k].second;
    }
    std::sort(indices.begin(), indices.end());
    return selection_from_indices(grid, indices);
}

DesignOutput design(const std::vector<double>& channels_mhz, const HoverModel& hover,
                    const DeltaPolicy& policy, const PolarPoint& p_c, SearchMode mode,
                    const DesignLimits& limits, std::uint64_t subset_budget, int threads) {
    const int n = static_cast<int>(channels_mhz.size());
    if (n < 1) {
        throw std::invalid_argument("design: need at least one channel");
    }

    std::optional<double> xi;
    double delta_theta = 0.0;
    double delta_rho = 0.0;
    if (const auto* p = std::get_if<XiThreshold>(&policy)) {
        std::tie(delta_theta, delta_rho) = solve_deltas(hover, p->xi, p->worst_profile);
        xi = p->xi;
    } else if (const auto* q = std::get_if<QuotientDb>(&policy)) {
        std::tie(delta_theta, delta_rho) = deltas_from_quotient_db(hover, q->db);
    } else {
        const auto& e = std::get<ExplicitDeltas>(policy);
        delta_theta = e.delta_theta_deg;
        delta_rho = e.delta_rho_m;
    }
    if (!(delta_theta > 0.0) || !(delta_rho > 0.0)) {
        throw std::invalid_argument("design: resolved spacings must be positive");
    }

    const CandidateGrid grid = build_grid(p_c, n, delta_theta, delta_rho, limits);
    const Selection sel = mode == SearchMode::exhaustive
                              ? exhaustive_search(grid, n, subset_budget, threads)
                              : heuristic_search(grid, n);

    Constellation c;
    c.symbols = sel.symbols;
    c.delta_theta_deg = delta_theta;
    c.delta_rho_m = delta_rho;
    c.channel_mhz = channels_mhz;
    validate(c, limits.fov, limits.dist_max_m);

    DesignReport report;
    report.pe_analytic = constellation_error_probability(c, hover);
    report.mean_pairwise_m = sel.mean_pairwise_m;
    report.delta_theta_deg = delta_theta;
    report.delta_rho_m = delta_rho;
    report.mode = mode;
    report.xi = xi;
    if (xi && report.pe_analytic > *xi * (1.0 + 1e-12)) {
        // The worst-case profile used by solve_deltas bounds every symbol.
        throw std::logic_error("design: selected layout exceeds the error threshold");
    }
    return {std::move(c), report};
}

const char* to_string(SearchMode mode) {
    return mode == SearchMode::exhaustive ? "exhaustive" : "heuristic";
}

SearchMode search_mode_from_string(const std::string& s) {
    if (s == "exhaustive") return SearchMode::exhaustive;
    if (s == "heuristic") return SearchMode::heuristic;
    throw std::invalid_argument("unknown search mode: " + s);
}

}  // namespace constel
