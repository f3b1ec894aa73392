#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>
#include <random>

#include "constel/geometry.hpp"

using namespace constel;

namespace {

PolarPoint random_point(std::mt19937& rng) {
    std::uniform_real_distribution<double> theta(-90.0, 90.0);
    std::uniform_real_distribution<double> rho(0.0, 12.0);
    return {theta(rng), rho(rng)};
}

}  // namespace

TEST_CASE("polar/cartesian conversion") {
    SUBCASE("boresight") {
        const CartesianPoint c = to_cartesian({0.0, 5.0});
        CHECK(std::abs(c.x_m) < 1e-12);
        CHECK(c.y_m == doctest::Approx(5.0));
    }
    SUBCASE("axis case") {
        const CartesianPoint c = to_cartesian({90.0, 2.0});
        CHECK(c.x_m == doctest::Approx(2.0));
        CHECK(std::abs(c.y_m) < 1e-12);
    }
    SUBCASE("30 degrees") {
        const CartesianPoint c = to_cartesian({30.0, 4.0});
        CHECK(c.x_m == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(c.y_m == doctest::Approx(3.4641016151377544).epsilon(1e-12));
    }
    SUBCASE("origin inverse convention") {
        const PolarPoint p = to_polar({0.0, 0.0});
        CHECK(p.theta_deg == 0.0);
        CHECK(p.rho_m == 0.0);
    }
    SUBCASE("round trip within 1e-9 relative") {
        std::mt19937 rng(11);
        for (int i = 0; i < 500; ++i) {
            PolarPoint p = random_point(rng);
            if (p.rho_m < 1e-6) p.rho_m += 1.0;
            const PolarPoint back = to_polar(to_cartesian(p));
            CHECK(back.theta_deg == doctest::Approx(p.theta_deg).epsilon(1e-9).scale(1.0));
            CHECK(back.rho_m == doctest::Approx(p.rho_m).epsilon(1e-9));
        }
    }
}

TEST_CASE("make_polar validates") {
    CHECK_THROWS_AS(make_polar(0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_polar(91.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(make_polar(-120.0, 5.0), std::invalid_argument);
    CHECK_NOTHROW(make_polar(45.0, 5.0));
    // narrower configured field of view
    const FieldOfView narrow = FieldOfView::symmetric(32.0);
    CHECK_THROWS_AS(make_polar(40.0, 5.0, narrow), std::invalid_argument);
    CHECK_NOTHROW(make_polar(-31.0, 5.0, narrow));
}

TEST_CASE("chord distance") {
    SUBCASE("collinear radial pair") {
        CHECK(distance_m({0.0, 5.0}, {0.0, 6.0}) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("identity") {
        CHECK(distance_m({12.0, 3.0}, {12.0, 3.0}) == 0.0);
    }
    SUBCASE("equal-range pair 18 degrees apart") {
        // 2 * rho * sin(half angle)
        const double expected = 2.0 * 5.0 * std::sin(deg_to_rad(9.0));
        CHECK(distance_m({-9.0, 5.0}, {9.0, 5.0}) == doctest::Approx(expected).epsilon(1e-13));
        CHECK(expected == doctest::Approx(1.5643446504023087).epsilon(1e-12));
    }
    SUBCASE("agrees with the cartesian embedding") {
        std::mt19937 rng(17);
        for (int i = 0; i < 500; ++i) {
            const PolarPoint a = random_point(rng);
            const PolarPoint b = random_point(rng);
            const CartesianPoint ca = to_cartesian(a);
            const CartesianPoint cb = to_cartesian(b);
            const double via_cartesian = std::hypot(ca.x_m - cb.x_m, ca.y_m - cb.y_m);
            CHECK(distance_m(a, b) == doctest::Approx(via_cartesian).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("distance is a metric") {
    std::mt19937 rng(23);
    for (int i = 0; i < 300; ++i) {
        const PolarPoint a = random_point(rng);
        const PolarPoint b = random_point(rng);
        const PolarPoint c = random_point(rng);
        const double dab = distance_m(a, b);
        const double dba = distance_m(b, a);
        CHECK(dab >= 0.0);
        CHECK(dab == dba);
        CHECK(distance_m(a, a) == 0.0);
        CHECK(dab <= distance_m(a, c) + distance_m(c, b) + 1e-12);
    }
}

TEST_CASE("distance is invariant under a common theta offset") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> offset(-45.0, 45.0);
    for (int i = 0; i < 300; ++i) {
        const PolarPoint a = random_point(rng);
        const PolarPoint b = random_point(rng);
        const double s = offset(rng);
        const double d1 = distance_m(a, b);
        const double d2 = distance_m({a.theta_deg + s, a.rho_m}, {b.theta_deg + s, b.rho_m});
        CHECK(d2 == doctest::Approx(d1).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("mean pairwise distance") {
    SUBCASE("fewer than two points") {
        CHECK(mean_pairwise_distance_m({}) == 0.0);
        const std::vector<PolarPoint> one{{0.0, 5.0}};
        CHECK(mean_pairwise_distance_m(one) == 0.0);
    }
    SUBCASE("two points") {
        const std::vector<PolarPoint> pts{{0.0, 5.0}, {0.0, 6.0}};
        CHECK(mean_pairwise_distance_m(pts) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("collinear radial triple") {
        const std::vector<PolarPoint> pts{{0.0, 5.0}, {0.0, 6.0}, {0.0, 7.0}};
        CHECK(mean_pairwise_distance_m(pts) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    }
    SUBCASE("4x2 grid against pair enumeration over the cartesian embedding") {
        std::vector<PolarPoint> pts;
        for (double theta : {-2.5, 2.5}) {
            for (int k = 0; k < 4; ++k) {
                pts.push_back({theta, 5.0 + 0.8 * k});
            }
        }
        double sum = 0.0;
        int pairs = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const CartesianPoint a = to_cartesian(pts[i]);
                const CartesianPoint b = to_cartesian(pts[j]);
                sum += std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
                ++pairs;
            }
        }
        CHECK(pairs == 28);
        CHECK(mean_pairwise_distance_m(pts) == doctest::Approx(sum / pairs).epsilon(1e-12));
    }
    SUBCASE("permutation invariance") {
        std::mt19937 rng(31);
        std::vector<PolarPoint> pts;
        for (int i = 0; i < 12; ++i) pts.push_back(random_point(rng));
        const double before = mean_pairwise_distance_m(pts);
        std::shuffle(pts.begin(), pts.end(), rng);
        CHECK(mean_pairwise_distance_m(pts) == doctest::Approx(before).epsilon(1e-12));
    }
}
