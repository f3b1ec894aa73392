#include <stdexcept>
#include <doctest.h>

#include <cmath>
#include <vector>

#include "constel/error_model.hpp"
#include "support/oracles.hpp"

using namespace constel;

namespace {

// Full rectangular lattice, theta-major, synthetic channels.
Constellation lattice(int n_theta, int n_rho, double dt, double dr, PolarPoint p_c = {0.0, 6.0}) {
    Constellation c;
    c.delta_theta_deg = dt;
    c.delta_rho_m = dr;
    const double theta_lo = p_c.theta_deg - 0.5 * dt * (n_theta - 1);
    for (int it = 0; it < n_theta; ++it) {
        for (int ir = 0; ir < n_rho; ++ir) {
            c.symbols.push_back({theta_lo + it * dt, p_c.rho_m + ir * dr});
            c.channel_mhz.push_back(900.0 + 5.0 * static_cast<double>(c.channel_mhz.size()));
        }
    }
    return c;
}

}  // namespace

TEST_CASE("q_function against quadrature") {
    CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q_function(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-12));
    for (double x = -8.0; x <= 8.0; x += 0.5) {
        CHECK(std::abs(q_function(x) - oracles::q_simpson(x)) < 1e-12);
    }
    for (double x : {0.3, 1.7, 4.2, 7.9}) {
        CHECK(q_function(x) + q_function(-x) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("neighbor counts") {
    SUBCASE("radial pair") {
        const Constellation c = lattice(1, 2, 18.0, 1.0, {0.0, 5.0});
        for (int i : {0, 1}) {
            const NeighborProfile p = neighbor_counts(c, i);
            CHECK(p.n_theta == 0);
            CHECK(p.n_rho == 1);
        }
    }
    SUBCASE("4x2 grid corner") {
        const Constellation c = lattice(2, 4, 5.0, 0.8, {0.0, 5.0});
        const NeighborProfile p = neighbor_counts(c, 0);
        CHECK(p.n_theta == 1);
        CHECK(p.n_rho == 1);
    }
    SUBCASE("3x3 center") {
        const Constellation c = lattice(3, 3, 4.0, 0.5, {0.0, 6.0});
        const NeighborProfile p = neighbor_counts(c, 4);  // theta-major center
        CHECK(p.n_theta == 2);
        CHECK(p.n_rho == 2);
    }
    SUBCASE("off-lattice rejected") {
        Constellation c = lattice(2, 2, 5.0, 0.8);
        c.symbols[3].rho_m += 0.31;
        CHECK_THROWS_AS(neighbor_counts(c, 0), std::invalid_argument);
    }
}

TEST_CASE("per-symbol error probability") {
    const HoverModel hover{0.9, 0.05};
    SUBCASE("single rho neighbor is one Q tail") {
        const double pe = symbol_error_probability({0, 1}, 18.0, 1.0, hover);
        CHECK(pe == doctest::Approx(q_function(0.5 / hover.sigma_rho_m)).epsilon(1e-15));
    }
    SUBCASE("no neighbors, no boundary") {
        CHECK(symbol_error_probability({0, 0}, 1.0, 1.0, hover) == 0.0);
    }
    SUBCASE("wide spacing limit") {
        CHECK(symbol_error_probability({2, 2}, 1000.0, 100.0, hover) == doctest::Approx(0.0));
    }
    SUBCASE("interior symbol with unit half-spacing ratios") {
        const HoverModel unit{1.0, 1.0};
        const double pe = symbol_error_probability({1, 1}, 2.0, 2.0, unit);
        const double q1 = oracles::q_simpson(1.0);
        CHECK(pe == doctest::Approx(1.0 - (1.0 - q1) * (1.0 - q1)).epsilon(1e-12));
        CHECK(pe == doctest::Approx(0.29213901826285904).epsilon(1e-9));
    }
    SUBCASE("axis symmetry between (n,0) and (0,n)") {
        for (int n : {1, 2}) {
            const double a = symbol_error_probability({n, 0}, 2.0, 0.3, {1.3, 0.4});
            const double b = symbol_error_probability({0, n}, 0.3, 2.0, {0.4, 1.3});
            CHECK(a == doctest::Approx(b).epsilon(1e-15));
        }
    }
    SUBCASE("rows factor into per-axis terms") {
        const HoverModel h{0.7, 0.09};
        const double qt = q_function(0.5 * 2.1 / h.sigma_theta_deg);
        const double qr = q_function(0.5 * 0.25 / h.sigma_rho_m);
        CHECK(symbol_error_probability({2, 2}, 2.1, 0.25, h) ==
              doctest::Approx(1.0 - (1.0 - 2.0 * qt) * (1.0 - 2.0 * qr)).epsilon(1e-15));
        CHECK(symbol_error_probability({2, 1}, 2.1, 0.25, h) ==
              doctest::Approx(1.0 - (1.0 - 2.0 * qt) * (1.0 - qr)).epsilon(1e-15));
        CHECK(symbol_error_probability({1, 2}, 2.1, 0.25, h) ==
              doctest::Approx(1.0 - (1.0 - qt) * (1.0 - 2.0 * qr)).epsilon(1e-15));
        CHECK(symbol_error_probability({2, 0}, 2.1, 0.25, h) == doctest::Approx(2.0 * qt));
        CHECK(symbol_error_probability({1, 0}, 2.1, 0.25, h) == doctest::Approx(qt));
        CHECK(symbol_error_probability({0, 2}, 2.1, 0.25, h) == doctest::Approx(2.0 * qr));
    }
}

TEST_CASE("constellation error probability") {
    SUBCASE("single symbol") {
        Constellation c = lattice(1, 1, 1.0, 1.0);
        CHECK(constellation_error_probability(c, {0.9, 0.05}) == 0.0);
    }
    SUBCASE("two symbols along theta match the closed form") {
        const HoverModel hover{0.9, 0.05};
        const Constellation c = lattice(2, 1, 18.0, 1.0, {0.0, 5.0});
        CHECK(constellation_error_probability(c, hover) ==
              doctest::Approx(q_function(9.0 / 0.9)).epsilon(1e-12));
    }
    SUBCASE("two symbols along rho match the closed form") {
        const HoverModel hover{0.9, 0.05};
        const Constellation c = lattice(1, 2, 18.0, 1.0, {0.0, 5.0});
        CHECK(constellation_error_probability(c, hover) ==
              doctest::Approx(q_function(0.5 / 0.05)).epsilon(1e-12));
    }
    SUBCASE("2x2 lattice at unit ratios") {
        const HoverModel unit{1.0, 1.0};
        const Constellation c = lattice(2, 2, 2.0, 2.0);
        CHECK(constellation_error_probability(c, unit) ==
              doctest::Approx(0.29213901826285904).epsilon(1e-9));
    }
    SUBCASE("monotone non-increasing in each spacing") {
        const HoverModel hover{0.9, 0.05};
        double last = 1.0;
        for (double dt : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            const double pe = constellation_error_probability(lattice(3, 3, dt, 0.05), hover);
            CHECK(pe <= last + 1e-15);
            last = pe;
        }
        last = 1.0;
        for (double dr : {0.02, 0.05, 0.1, 0.2}) {
            const double pe = constellation_error_probability(lattice(3, 3, 1.0, dr), hover);
            CHECK(pe <= last + 1e-15);
            last = pe;
        }
    }
    SUBCASE("edge symbols never exceed interior symbols") {
        const HoverModel hover{0.9, 0.05};
        const Constellation c = lattice(2, 4, 5.0, 0.1, {0.0, 5.0});
        double interior_max = 0.0;
        double edge_min = 1.0;
        for (int i = 0; i < c.size(); ++i) {
            const NeighborProfile p = neighbor_counts(c, i);
            const double pe =
                symbol_error_probability(p, c.delta_theta_deg, c.delta_rho_m, hover);
            const bool interior = p.n_theta == 2 || p.n_rho == 2;
            if (interior) {
                interior_max = std::max(interior_max, pe);
            } else {
                edge_min = std::min(edge_min, pe);
            }
        }
        CHECK(edge_min <= interior_max);
    }
}

TEST_CASE("symbol regions") {
    const Constellation c = lattice(2, 2, 5.0, 0.8, {0.0, 5.0});
    SUBCASE("edge sides are unbounded") {
        const SymbolRegion r = symbol_region(c, 0);  // (-2.5, 5.0)
        CHECK(std::isinf(r.theta_low_deg));
        CHECK(r.theta_high_deg == doctest::Approx(0.0).scale(1.0));
        CHECK(std::isinf(r.rho_low_m));
        CHECK(r.rho_high_m == doctest::Approx(5.4));
        CHECK(r.contains({-40.0, 2.0}));
        CHECK(!r.contains({0.5, 5.0}));
    }
    SUBCASE("regions tile a full rectangle without overlap") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> theta(-20.0, 20.0);
        std::uniform_real_distribution<double> rho(3.0, 8.0);
        for (int t = 0; t < 2000; ++t) {
            const PolarPoint p{theta(rng), rho(rng)};
            int containing = 0;
            for (int i = 0; i < c.size(); ++i) {
                if (symbol_region(c, i).contains(p)) ++containing;
            }
            CHECK(containing == 1);
        }
    }
}

TEST_CASE("monte carlo estimator") {
    const HoverModel hover{0.9, 0.05};
    SUBCASE("tiny sigma never misses") {
        const Constellation c = lattice(2, 2, 18.0, 1.0, {0.0, 5.0});
        const MonteCarloEstimate est = monte_carlo_pe(c, {1e-6, 1e-9}, 20000, 1);
        CHECK(est.misses == 0);
    }
    SUBCASE("wide-margin spacing gives zero misses at 1e6 trials") {
        // half-spacing to sigma ratio of about 20 (13 dB quotient)
        const Constellation c = lattice(1, 2, 18.0, 1.0, {0.0, 5.0});
        const MonteCarloEstimate est = monte_carlo_pe(c, hover, 1'000'000, 2);
        CHECK(est.misses == 0);
    }
    SUBCASE("N=2 at unit half-spacing ratio agrees with Q(1)") {
        const Constellation c = lattice(2, 1, 1.8, 1.0, {0.0, 5.0});
        const MonteCarloEstimate est = monte_carlo_pe(c, hover, 1'000'000, 3);
        CHECK(std::abs(est.pe - 0.15865525393145705) <= est.ci_half_width);
    }
    SUBCASE("analytic matches within three CI half-widths") {
        const Constellation c = lattice(2, 2, 1.8, 0.1, {0.0, 5.0});
        const double analytic = constellation_error_probability(c, hover);
        const MonteCarloEstimate est = monte_carlo_pe(c, hover, 400'000, 4);
        CHECK(std::abs(analytic - est.pe) <= 3.0 * est.ci_half_width);
    }
    SUBCASE("estimate independent of worker count") {
        const Constellation c = lattice(2, 2, 1.8, 0.1, {0.0, 5.0});
        const MonteCarloEstimate a = monte_carlo_pe(c, hover, 123'457, 99, 1);
        const MonteCarloEstimate b = monte_carlo_pe(c, hover, 123'457, 99, 4);
        CHECK(a.misses == b.misses);
        CHECK(a.pe == b.pe);
    }
    SUBCASE("seed changes the draw") {
        const Constellation c = lattice(2, 2, 1.8, 0.1, {0.0, 5.0});
        const MonteCarloEstimate a = monte_carlo_pe(c, hover, 50'000, 7);
        const MonteCarloEstimate b = monte_carlo_pe(c, hover, 50'000, 8);
        CHECK(a.misses != b.misses);
    }
}
