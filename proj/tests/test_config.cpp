#include <stdexcept>
#include <doctest.h>

#include "commands.hpp"
#include "config.hpp"

using namespace constel;
using namespace constel::cli;

TEST_CASE("config defaults and sections") {
    const RunConfig cfg = load_config_text("{}", {});
    CHECK(cfg.sensor.rate_r == doctest::Approx(250.0));
    CHECK(cfg.hover.sigma_theta_deg == doctest::Approx(0.9));
    CHECK(cfg.hover.sigma_rho_m == doctest::Approx(0.05));
    CHECK(cfg.pid.kp == doctest::Approx(0.6));
    CHECK(cfg.pid.kd == doctest::Approx(0.12));
    CHECK(cfg.pid.ki == doctest::Approx(0.05));
    CHECK(!cfg.seed.has_value());
    CHECK(!cfg.design.has_value());
}

TEST_CASE("unknown keys are rejected with their path") {
    CHECK_THROWS_WITH_AS(load_config_text(R"({"hover": {"sigma": 1}})", {}),
                         doctest::Contains("$.hover: unknown key 'sigma'"), ConfigError);
    CHECK_THROWS_WITH_AS(load_config_text(R"({"hvoer": {}})", {}),
                         doctest::Contains("unknown key 'hvoer'"), ConfigError);
}

TEST_CASE("parse errors carry the line number") {
    CHECK_THROWS_WITH_AS(load_config_text("{\n  \"hover\": {\n  bad\n}}", {}, "cfg.json"),
                         doctest::Contains("cfg.json:3"), ConfigError);
}

TEST_CASE("type errors carry the dotted path") {
    CHECK_THROWS_WITH_AS(load_config_text(R"({"hover": {"sigma_rho_m": "x"}})", {}),
                         doctest::Contains("$.hover.sigma_rho_m"), ConfigError);
    CHECK_THROWS_WITH_AS(load_config_text(R"({"design": {"channels_mhz": []}})", {}),
                         doctest::Contains("$.design.channels_mhz"), ConfigError);
}

TEST_CASE("design section policy selection") {
    const char* base = R"({"design": {"channels_mhz": [900, 905]%s}})";
    SUBCASE("exactly one policy required") {
        CHECK_THROWS_WITH_AS(
            load_config_text(R"({"design": {"channels_mhz": [900, 905]}})", {}),
            doctest::Contains("exactly one of"), ConfigError);
        CHECK_THROWS_AS(
            load_config_text(
                R"({"design": {"channels_mhz": [900], "xi": 0.1, "quotient_db": 13}})", {}),
            ConfigError);
        CHECK_THROWS_AS(
            load_config_text(R"({"design": {"channels_mhz": [900], "delta_theta_deg": 18}})", {}),
            ConfigError);
    }
    SUBCASE("explicit deltas") {
        const RunConfig cfg = load_config_text(
            R"({"design": {"channels_mhz": [900, 905], "delta_theta_deg": 18, "delta_rho_m": 1}})",
            {});
        REQUIRE(cfg.design.has_value());
        CHECK(*cfg.design->delta_theta_deg == 18.0);
        CHECK(cfg.design->mode == SearchMode::exhaustive);
    }
    (void)base;
}

TEST_CASE("dotted overrides") {
    SUBCASE("override changes a nested value and the hash") {
        const RunConfig a = load_config_text("{}", {});
        const RunConfig b = load_config_text("{}", {"hover.sigma_rho_m=0.08"});
        CHECK(b.hover.sigma_rho_m == doctest::Approx(0.08));
        CHECK(a.config_hash != b.config_hash);
    }
    SUBCASE("override creating an unknown key still fails validation") {
        CHECK_THROWS_AS(load_config_text("{}", {"hover.nope=1"}), ConfigError);
    }
    SUBCASE("seed override") {
        const RunConfig cfg = load_config_text("{}", {"seed=42"});
        REQUIRE(cfg.seed.has_value());
        CHECK(*cfg.seed == 42);
    }
    SUBCASE("malformed override") {
        CHECK_THROWS_AS(load_config_text("{}", {"hover"}), ConfigError);
    }
    SUBCASE("identical documents hash identically") {
        const RunConfig a = load_config_text(R"({"hover": {"sigma_rho_m": 0.05}})", {});
        const RunConfig b = load_config_text(R"({"hover":{"sigma_rho_m":0.05}})", {});
        CHECK(a.config_hash == b.config_hash);
    }
}

TEST_CASE("scenario section with an inline constellation") {
    const std::string text = R"({
      "scenario": {
        "channels_mhz": [900, 905],
        "constellation": {
          "format": "constel-constellation/1", "n": 2,
          "delta_theta_deg": 18.0, "delta_rho_m": 1.0,
          "symbols": [
            {"index": 0, "theta_deg": 0.0, "rho_m": 6.0, "channel_mhz": 900.0},
            {"index": 1, "theta_deg": 0.0, "rho_m": 5.0, "channel_mhz": 905.0}
          ]
        },
        "jammers": [{"t_start_s": 10, "t_end_s": 1e9, "channels_mhz": [900]}]
      }
    })";
    const RunConfig cfg = load_config_text(text, {});
    REQUIRE(cfg.scenario.has_value());
    CHECK(cfg.scenario->scenario.constellation.size() == 2);
    CHECK(cfg.scenario->scenario.jammers.size() == 1);
    SUBCASE("constellation and file are mutually exclusive") {
        CHECK_THROWS_AS(
            load_config_text(R"({"scenario": {"channels_mhz": [900]}})", {}), ConfigError);
    }
}

TEST_CASE("lattice builder produces valid constellations") {
    const Constellation c = make_lattice(2, 4, {0.0, 5.0}, 5.0, 0.8);
    CHECK(c.size() == 8);
    CHECK_NOTHROW(validate(c, FieldOfView::symmetric(90.0), 12.0));
    const Constellation single = make_lattice(1, 1, {0.0, 6.0}, 1.0, 0.1);
    CHECK(single.size() == 1);
}
