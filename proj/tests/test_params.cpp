#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "mbloch/params.hpp"

using namespace mbloch;

TEST_CASE("three-level map: balanced pump gives zero inversion") {
    ThreeLevelParams p;
    p.gamma_21 = 0.7;
    p.R_pump = 0.7;
    p.gamma_32 = 1e4;
    auto m = map_three_level(p, 1.0, 0.0);
    CHECK(m.d0 == 0.0);
    CHECK(m.gamma_par == doctest::Approx(1.4));
    CHECK(m.provenance == Provenance::three_level);
}

TEST_CASE("three-level map saturates to full inversion at huge pump") {
    ThreeLevelParams p;
    p.gamma_21 = 1.0;
    p.R_pump = 1e6;
    p.gamma_32 = 1e12;
    auto m = map_three_level(p, 1.0, 0.0);
    CHECK(std::abs(m.d0 - 1.0) < 2e-6);
}

TEST_CASE("three-level map at R = 3 gamma_21") {
    // Direct substitution: d0 = (3-1)/(3+1) = 1/2, gamma_par = 4 gamma_21.
    ThreeLevelParams p;
    p.gamma_21 = 2.0;
    p.R_pump = 6.0;
    p.gamma_32 = 1e5;
    auto m = map_three_level(p, 1.0, 0.0);
    CHECK(m.d0 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.gamma_par == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("three-level map rejects the undefined zero-rate case") {
    ThreeLevelParams p;
    p.gamma_21 = 0.0;
    p.R_pump = 0.0;
    CHECK_THROWS_AS(map_three_level(p, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("four-level map limits") {
    FourLevelParams p;
    p.gamma_20 = 0.3;
    p.gamma_21 = 0.2;
    p.gamma_10 = 1e4;
    p.gamma_32 = 1e4;

    SUBCASE("no pump, no inversion") {
        p.R_pump = 0.0;
        CHECK(map_four_level(p, 1.0, 0.0).d0 == 0.0);
    }
    SUBCASE("pump equal to the total decay gives d0 = 1/2") {
        p.R_pump = 0.5;
        CHECK(map_four_level(p, 1.0, 0.0).d0 == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("huge pump saturates toward d0 = 1") {
        p.R_pump = 1e7;
        CHECK(map_four_level(p, 1.0, 0.0).d0 == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("maps are monotone in the pump and bounded") {
    std::mt19937 rng(731);
    std::uniform_real_distribution<double> rate(0.01, 5.0);
    for (int i = 0; i < 200; ++i) {
        ThreeLevelParams p3;
        p3.gamma_21 = rate(rng);
        p3.gamma_32 = 1e5;
        FourLevelParams p4;
        p4.gamma_20 = rate(rng);
        p4.gamma_21 = rate(rng);
        p4.gamma_10 = p4.gamma_32 = 1e5;

        double R1 = rate(rng), R2 = R1 + rate(rng);
        p3.R_pump = R1;
        auto a3 = map_three_level(p3, 1.0, 0.0);
        p3.R_pump = R2;
        auto b3 = map_three_level(p3, 1.0, 0.0);
        CHECK(b3.d0 > a3.d0);
        CHECK(b3.gamma_par > a3.gamma_par);
        CHECK(a3.d0 >= -1.0);
        CHECK(a3.d0 < 1.0);

        p4.R_pump = R1;
        auto a4 = map_four_level(p4, 1.0, 0.0);
        p4.R_pump = R2;
        auto b4 = map_four_level(p4, 1.0, 0.0);
        CHECK(b4.d0 > a4.d0);
        CHECK(a4.d0 >= 0.0);
        CHECK(a4.d0 < 1.0);
    }
}

TEST_CASE("reduction validity flags follow the dominance ratio") {
    ThreeLevelParams p;
    p.gamma_21 = 1.0;
    p.gamma_perp = 1.0;
    p.R_pump = 0.5;
    p.gamma_32 = 99.0;
    CHECK(!three_level_reduction_valid(p));
    p.gamma_32 = 101.0;
    CHECK(three_level_reduction_valid(p));
    CHECK(!three_level_reduction_valid(p, 200.0));
}

TEST_CASE("cavity derived quantities") {
    CavityParams cav;
    cav.R = std::exp(-0.5); // |ln R^2| = 1
    cav.L_m = 1.0;
    cav.L_c = 2.0;
    cav.c = 1.0;
    CHECK(cav.kappa() == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(cav.round_trip_delay() == doctest::Approx(1.0));
    CHECK(cav.free_spectral_range() == doctest::Approx(std::numbers::pi));

    SUBCASE("kappa vanishes continuously and monotonically toward R = 1") {
        double prev = cav.kappa();
        for (double R : {0.9, 0.99, 0.999, 0.99999, 1.0}) {
            cav.R = R;
            CHECK(cav.kappa() <= prev);
            prev = cav.kappa();
        }
        CHECK(prev == 0.0);
    }
}

TEST_CASE("effective pump parameter") {
    MediumParams m;
    m.gamma_perp = 2.0;
    m.gamma_par = 1.0;
    m.d0 = 0.5;

    CavityParams cav;
    cav.L_m = 1.0;
    cav.L_c = 1.0;
    cav.c = 3.0;
    cav.R = std::exp(-0.5); // |ln R^2| = 1

    SUBCASE("d0 = 0 gives r = 0 but finite G") {
        m.d0 = 0.0;
        m.g = 1.0;
        auto ep = effective_pump_r(m, cav);
        CHECK(ep.r == 0.0);
        CHECK(ep.G > 0.0);
    }
    SUBCASE("gain equal to loss sits exactly at r = 1") {
        // a L_m = |ln R^2|: choose g so a = 1.
        m.g = std::abs(std::log(cav.R * cav.R)) * cav.c * m.gamma_perp /
              (2.0 * m.d0 * cav.L_m);
        auto ep = effective_pump_r(m, cav);
        CHECK(ep.r == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(ep.a * cav.L_m ==
              doctest::Approx(std::abs(std::log(cav.R * cav.R))));
    }
    SUBCASE("direct substitution g = gamma_perp c") {
        MediumParams mm;
        mm.gamma_perp = 2.0;
        mm.gamma_par = 1.0;
        mm.d0 = 0.5;
        mm.g = mm.gamma_perp * cav.c;
        auto ep = effective_pump_r(mm, cav);
        // r = 2*0.5*gp*c*1/(gp*c*1) = 1
        CHECK(ep.r == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(ep.G == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("lossless cavity rejected") {
        cav.R = 1.0;
        CHECK_THROWS_AS(effective_pump_r(m, cav), std::invalid_argument);
    }
}

TEST_CASE("effective pump scales linearly in d0 and L_m, inversely in loss") {
    std::mt19937 rng(88);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    for (int i = 0; i < 50; ++i) {
        MediumParams m;
        m.gamma_perp = 1.0;
        m.gamma_par = 1.0;
        m.g = 1.0 + u(rng);
        m.d0 = u(rng);
        CavityParams cav;
        cav.R = u(rng);
        cav.L_m = u(rng);
        cav.L_c = cav.L_m + u(rng);

        double r0 = effective_pump_r(m, cav).r;
        MediumParams m2 = m;
        m2.d0 = m.d0 / 2.0;
        CHECK(effective_pump_r(m2, cav).r == doctest::Approx(r0 / 2.0));
        CavityParams cav2 = cav;
        cav2.L_m = cav.L_m / 2.0;
        CHECK(effective_pump_r(m2, cav2).r == doctest::Approx(r0 / 4.0));
        // Doubling |ln R^2| halves r.
        CavityParams cav3 = cav;
        cav3.R = cav.R * cav.R;
        CHECK(effective_pump_r(m, cav3).r == doctest::Approx(r0 / 2.0));
    }
}

TEST_CASE("medium invariants enforced") {
    MediumParams m;
    m.gamma_perp = 1.0;
    m.gamma_par = 1.0;
    m.d0 = 1.5;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m.d0 = 0.0;
    m.gamma_par = 2.5; // violates gamma_perp >= gamma_par/2
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m.gamma_par = 2.0;
    CHECK_NOTHROW(m.validate());
}
