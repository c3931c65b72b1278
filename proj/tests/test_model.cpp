#include <catch2/catch_amalgamated.hpp>

#include "vacdet/model.hpp"

using namespace vacdet;

TEST_CASE("default spec validates cleanly") {
    SystemSpec spec;
    const auto rep = validate(spec);
    CHECK(rep.ok());
    CHECK(rep.warnings.empty());
    CHECK(spec.gamma_total() == 1.5);
    CHECK(spec.xi() == Catch::Approx(0.5));
    CHECK(spec.detuning() == 0.0);
}

TEST_CASE("validation rejects bad parameters") {
    SystemSpec spec;

    SECTION("electronic gamma must be positive") {
        spec.electronic.gamma = 0.0;
        CHECK_FALSE(validate(spec).ok());
    }
    SECTION("radiative gamma may vanish but not go negative") {
        spec.radiative.gamma = 0.0;
        CHECK(validate(spec).ok());
        spec.radiative.gamma = -0.1;
        CHECK_FALSE(validate(spec).ok());
    }
    SECTION("mode_count must be odd and >= 3") {
        spec.electronic.mode_count = 2000;
        CHECK_FALSE(validate(spec).ok());
        spec.electronic.mode_count = 1;
        CHECK_FALSE(validate(spec).ok());
    }
    SECTION("bandwidth must be positive") {
        spec.radiative.bandwidth = 0.0;
        CHECK_FALSE(validate(spec).ok());
    }
    SECTION("kind tags must match slots") {
        std::swap(spec.electronic.kind, spec.radiative.kind);
        CHECK_FALSE(validate(spec).ok());
    }
    SECTION("transition frequency must be positive") {
        spec.detector.transition_frequency = -1.0;
        CHECK_FALSE(validate(spec).ok());
    }
}

TEST_CASE("validation warns without rejecting") {
    SystemSpec spec;
    SECTION("non-Markovian reservoir") {
        spec.radiative.bandwidth = 3.0; // Omega/gamma = 6 < 10
        const auto rep = validate(spec);
        CHECK(rep.ok());
        REQUIRE_FALSE(rep.warnings.empty());
        CHECK(rep.warnings.front().find("non-Markovian") != std::string::npos);
        CHECK_FALSE(spec.radiative.markovian());
    }
    SECTION("weak-excitation limit strained") {
        spec.drive.alpha = 10.0; // g_L |alpha| / gamma_eps = 1/1.5 > 0.1
        const auto rep = validate(spec);
        CHECK(rep.ok());
        REQUIRE_FALSE(rep.warnings.empty());
        CHECK(rep.warnings.front().find("weak-excitation") != std::string::npos);
    }
}

TEST_CASE("spec JSON round-trip is exact") {
    SystemSpec spec;
    spec.electronic.gamma = 0.75;
    spec.radiative.bandwidth = 17.5;
    spec.drive.alpha = complex(0.5, -0.25);
    spec.drive.laser_frequency = 101.25;
    const nlohmann::json j = spec;
    const auto back = j.get<SystemSpec>();
    CHECK(nlohmann::json(back) == j);
    CHECK(back.drive.alpha == spec.drive.alpha);
}

TEST_CASE("drive alpha accepts a plain number") {
    nlohmann::json j = SystemSpec{};
    j["drive"]["alpha"] = 2.5;
    const auto spec = j.get<SystemSpec>();
    CHECK(spec.drive.alpha == complex(2.5, 0.0));
}

TEST_CASE("unknown reservoir kind is rejected") {
    nlohmann::json j = SystemSpec{};
    j["electronic"]["kind"] = "thermal";
    CHECK_THROWS_AS(j.get<SystemSpec>(), nlohmann::json::exception);
}
