#include <stdexcept>
#include <doctest.h>

#include <cmath>
#include <random>

#include "constel/errors.hpp"
#include "constel/flight.hpp"

using namespace constel;

namespace {
const PidParams kStockGains{0.6, 0.12, 0.05};
const FlightConfig kDefaults{};
}  // namespace

TEST_CASE("fly_to basics") {
    SUBCASE("start equals target") {
        const Trajectory t = fly_to({0.0, 5.0}, {0.0, 5.0}, kStockGains, kDefaults);
        CHECK(t.travel_time_s == 0.0);
        REQUIRE(t.samples.size() == 1);
        CHECK(t.samples[0].t_s == 0.0);
    }
    SUBCASE("one-meter leg regression value") {
        const Trajectory t = fly_to({0.0, 5.0}, {0.0, 6.0}, kStockGains, kDefaults);
        CHECK(std::abs(t.travel_time_s - 4.21) <= kDefaults.dt_s + 1e-12);
    }
    SUBCASE("samples advance by dt and end inside the arrival radius") {
        const Trajectory t = fly_to({0.0, 5.0}, {10.0, 6.0}, kStockGains, kDefaults);
        for (std::size_t i = 1; i < t.samples.size(); ++i) {
            CHECK(t.samples[i].t_s - t.samples[i - 1].t_s ==
                  doctest::Approx(kDefaults.dt_s).epsilon(1e-9));
        }
        const CartesianPoint goal = to_cartesian({10.0, 6.0});
        const CartesianPoint end = t.samples.back().position;
        CHECK(std::hypot(goal.x_m - end.x_m, goal.y_m - end.y_m) <= kDefaults.arrival_radius_m);
    }
    SUBCASE("longer legs never arrive faster") {
        const double t1 = fly_to({0.0, 5.0}, {0.0, 6.0}, kStockGains, kDefaults).travel_time_s;
        const double t2 = fly_to({0.0, 5.0}, {0.0, 7.0}, kStockGains, kDefaults).travel_time_s;
        CHECK(t2 >= t1);
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> leg(0.05, 6.0);
        for (int i = 0; i < 10; ++i) {
            double a = leg(rng);
            double b = leg(rng);
            if (a > b) std::swap(a, b);
            const double ta =
                fly_to({0.0, 5.0}, {0.0, 5.0 + a}, kStockGains, kDefaults).travel_time_s;
            const double tb =
                fly_to({0.0, 5.0}, {0.0, 5.0 + b}, kStockGains, kDefaults).travel_time_s;
            CHECK(tb >= ta - kDefaults.dt_s);
        }
    }
    SUBCASE("travel time invariant under rigid rotation") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> angle(-30.0, 30.0);
        const double base =
            fly_to({-3.0, 5.0}, {4.0, 6.5}, kStockGains, kDefaults).travel_time_s;
        for (int i = 0; i < 5; ++i) {
            const double s = angle(rng);
            const double rotated =
                fly_to({-3.0 + s, 5.0}, {4.0 + s, 6.5}, kStockGains, kDefaults).travel_time_s;
            CHECK(std::abs(rotated - base) <= kDefaults.dt_s + 1e-12);
        }
    }
    SUBCASE("halving dt moves travel time by less than two percent") {
        FlightConfig half = kDefaults;
        half.dt_s = 0.005;
        for (double leg : {0.4, 1.0, 2.3}) {
            const double coarse =
                fly_to({0.0, 5.0}, {0.0, 5.0 + leg}, kStockGains, kDefaults).travel_time_s;
            const double fine =
                fly_to({0.0, 5.0}, {0.0, 5.0 + leg}, kStockGains, half).travel_time_s;
            CHECK(std::abs(fine - coarse) / coarse < 0.02);
        }
    }
    SUBCASE("not settling in time trips the guard") {
        FlightConfig tight = kDefaults;
        tight.max_sim_time_s = 0.05;
        CHECK_THROWS_AS(fly_to({0.0, 2.0}, {0.0, 10.0}, kStockGains, tight), guard_error);
    }
    SUBCASE("bad gains are rejected") {
        CHECK_THROWS_AS(fly_to({0.0, 5.0}, {0.0, 6.0}, {0.0, 0.1, 0.0}, kDefaults),
                        std::invalid_argument);
    }
}

TEST_CASE("mean travel time") {
    Constellation radial;
    radial.delta_theta_deg = 18.0;
    radial.delta_rho_m = 1.0;
    radial.symbols = {{0.0, 5.0}, {0.0, 6.0}};
    radial.channel_mhz = {900.0, 905.0};

    SUBCASE("single symbol") {
        Constellation one = radial;
        one.symbols.resize(1);
        one.channel_mhz.resize(1);
        CHECK(mean_travel_time(one, kStockGains, kDefaults) == 0.0);
    }
    SUBCASE("two symbols equal the single leg") {
        const double leg =
            fly_to(radial.symbols[0], radial.symbols[1], kStockGains, kDefaults).travel_time_s;
        CHECK(mean_travel_time(radial, kStockGains, kDefaults) ==
              doctest::Approx(leg).epsilon(1e-12));
    }
    SUBCASE("wider spacing takes longer") {
        Constellation wide = radial;
        wide.symbols[1].rho_m = 7.0;
        wide.delta_rho_m = 2.0;
        CHECK(mean_travel_time(wide, kStockGains, kDefaults) >=
              mean_travel_time(radial, kStockGains, kDefaults));
    }
    SUBCASE("theta pair beats nothing; optimal layout flies less") {
        // same grid, exhaustive (radial pair, 1.0 m) vs heuristic (theta pair, 1.56 m)
        Constellation theta_pair = radial;
        theta_pair.symbols = {{-9.0, 5.0}, {9.0, 5.0}};
        CHECK(mean_travel_time(radial, kStockGains, kDefaults) <=
              mean_travel_time(theta_pair, kStockGains, kDefaults));
    }
}
