#include "constel/error_model.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "constel/random.hpp"

namespace constel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile
constexpr double kLatticeTol = 1e-9;

bool near_multiple(double diff, double delta, long long& k_out) {
    const double ratio = diff / delta;
    const double k = std::round(ratio);
    if (std::abs(ratio - k) <= kLatticeTol * std::max(1.0, std::abs(ratio))) {
        k_out = static_cast<long long>(k);
        return true;
    }
    return false;
}

// Which lattice neighbors exist around symbol i, by side.
struct NeighborSides {
    bool theta_down = false, theta_up = false;
    bool rho_down = false, rho_up = false;
};

NeighborSides neighbor_sides(const Constellation& c, int symbol_index) {
    if (symbol_index < 0 || symbol_index >= c.size()) {
        throw std::invalid_argument("symbol index out of range");
    }
    if (c.delta_theta_deg <= 0.0 || c.delta_rho_m <= 0.0 || !on_lattice(c, kLatticeTol)) {
        throw std::invalid_argument("neighbor counts require an on-lattice constellation");
    }
    const PolarPoint& s = c.symbols[symbol_index];
    NeighborSides sides;
    for (int j = 0; j < c.size(); ++j) {
        if (j == symbol_index) continue;
        long long kt = 0, kr = 0;
        near_multiple(c.symbols[j].theta_deg - s.theta_deg, c.delta_theta_deg, kt);
        near_multiple(c.symbols[j].rho_m - s.rho_m, c.delta_rho_m, kr);
        if (kr == 0 && kt == 1) sides.theta_up = true;
        if (kr == 0 && kt == -1) sides.theta_down = true;
        if (kt == 0 && kr == 1) sides.rho_up = true;
        if (kt == 0 && kr == -1) sides.rho_down = true;
    }
    return sides;
}

}  // namespace

double q_function(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

NeighborProfile neighbor_counts(const Constellation& c, int symbol_index) {
    const NeighborSides s = neighbor_sides(c, symbol_index);
    return {static_cast<int>(s.theta_down) + static_cast<int>(s.theta_up),
            static_cast<int>(s.rho_down) + static_cast<int>(s.rho_up)};
}

SymbolRegion symbol_region(const Constellation& c, int symbol_index) {
    const NeighborSides sides = neighbor_sides(c, symbol_index);
    const PolarPoint& s = c.symbols[symbol_index];
    return {
        sides.theta_down ? s.theta_deg - 0.5 * c.delta_theta_deg : -kInf,
        sides.theta_up ? s.theta_deg + 0.5 * c.delta_theta_deg : kInf,
        sides.rho_down ? s.rho_m - 0.5 * c.delta_rho_m : -kInf,
        sides.rho_up ? s.rho_m + 0.5 * c.delta_rho_m : kInf,
    };
}

double symbol_error_probability(const NeighborProfile& profile, double delta_theta_deg,
                                double delta_rho_m, const HoverModel& hover) {
    if (profile.n_theta < 0 || profile.n_theta > 2 || profile.n_rho < 0 || profile.n_rho > 2) {
        throw std::invalid_argument("neighbor counts must lie in {0, 1, 2}");
    }
    if (!(delta_theta_deg > 0.0) || !(delta_rho_m > 0.0)) {
        throw std::invalid_argument("spacings must be positive");
    }
    // Per-axis escape mass: n one-sided tails of Q(half-spacing / sigma).
    const double qt = q_function(0.5 * delta_theta_deg / hover.sigma_theta_deg);
    const double qr = q_function(0.5 * delta_rho_m / hover.sigma_rho_m);
    const double stay_theta = 1.0 - profile.n_theta * qt;
    const double stay_rho = 1.0 - profile.n_rho * qr;
    return 1.0 - stay_theta * stay_rho;
}

double constellation_error_probability(const Constellation& c, const HoverModel& hover) {
    if (c.symbols.empty()) {
        throw std::invalid_argument("constellation: no symbols");
    }
    if (c.size() == 1) {
        return 0.0;
    }
    double sum = 0.0;
    for (int i = 0; i < c.size(); ++i) {
        sum += symbol_error_probability(neighbor_counts(c, i), c.delta_theta_deg, c.delta_rho_m,
                                        hover);
    }
    return sum / c.size();
}

MonteCarloEstimate monte_carlo_pe(const Constellation& c, const HoverModel& hover,
                                  std::uint64_t trials, std::uint64_t seed, int threads) {
    if (trials < 1) {
        throw std::invalid_argument("monte_carlo_pe: trials must be >= 1");
    }
    const int n = c.size();
    std::vector<SymbolRegion> regions(n);
    for (int i = 0; i < n; ++i) {
        regions[i] = symbol_region(c, i);
    }

    // Fixed-size blocks keyed by block index make the tally independent of how
    // blocks are spread over workers.
    constexpr std::uint64_t kBlock = 1 << 14;
    const std::uint64_t n_blocks = (trials + kBlock - 1) / kBlock;

    auto run_blocks = [&](std::uint64_t first, std::uint64_t last) {
        std::uint64_t misses = 0;
        for (std::uint64_t b = first; b < last; ++b) {
            auto rng = make_rng(seed, b);
            std::uniform_int_distribution<int> pick(0, n - 1);
            std::normal_distribution<double> eps_theta(0.0, hover.sigma_theta_deg);
            std::normal_distribution<double> eps_rho(0.0, hover.sigma_rho_m);
            const std::uint64_t count = std::min(kBlock, trials - b * kBlock);
            for (std::uint64_t t = 0; t < count; ++t) {
                const int s = pick(rng);
                const PolarPoint p{c.symbols[s].theta_deg + eps_theta(rng),
                                   c.symbols[s].rho_m + eps_rho(rng)};
                if (!regions[s].contains(p)) {
                    ++misses;
                }
            }
        }
        return misses;
    };

    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp<int>(workers, 1, static_cast<int>(std::min<std::uint64_t>(n_blocks, 64)));

    std::uint64_t misses = 0;
    if (workers == 1) {
        misses = run_blocks(0, n_blocks);
    } else {
        std::vector<std::future<std::uint64_t>> parts;
        const std::uint64_t chunk = (n_blocks + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::uint64_t first = w * chunk;
            const std::uint64_t last = std::min(n_blocks, first + chunk);
            if (first >= last) break;
            parts.push_back(std::async(std::launch::async, run_blocks, first, last));
        }
        for (auto& p : parts) {
            misses += p.get();
        }
    }

    MonteCarloEstimate est;
    est.trials = trials;
    est.misses = misses;
    est.pe = static_cast<double>(misses) / static_cast<double>(trials);
    est.ci_half_width = kZ95 * std::sqrt(est.pe * (1.0 - est.pe) / static_cast<double>(trials));
    return est;
}

}  // namespace constel
