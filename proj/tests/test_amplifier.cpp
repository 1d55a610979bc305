#include <doctest.h>

#include <cmath>
#include <complex>

#include "mbloch/amplifier.hpp"

using namespace mbloch;

namespace {

MediumParams medium(double gp, double gpar, double d0, double delta) {
    MediumParams m;
    m.gamma_perp = gp;
    m.gamma_par = gpar;
    m.d0 = d0;
    m.delta = delta;
    m.g = 1.0;
    return m;
}

// Independent oracle: plain bisection on the implicit single-pass relation,
// sharing no code with the library solver.
double eqA_bisect(double A0, const MediumParams& m, double c, double z) {
    auto F = [&](double A) {
        double gp2 = m.gamma_perp * m.gamma_perp;
        return (gp2 + m.delta * m.delta) * std::log(A / A0) +
               2.0 * m.gamma_perp / m.gamma_par * (A * A - A0 * A0) -
               m.gamma_perp * m.d0 * m.g / c * z;
    };
    double lo = A0, hi = A0;
    if (m.d0 * z >= 0.0) {
        while (F(hi) < 0.0) hi *= 2.0;
    } else {
        while (F(lo) > 0.0) lo /= 2.0;
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (F(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("transparent medium leaves the field unchanged") {
    auto m = medium(1.0, 1.0, 0.0, 0.7);
    auto res = propagate_exact({0.3, 0.1}, m, 1.0, 5.0, 11);
    for (double a2 : res.amp2)
        CHECK(a2 == doctest::Approx(std::norm(std::complex<double>(0.3, 0.1)))
                        .epsilon(1e-12));
    CHECK(solve_implicit(0.5, m, 1.0, 5.0) == 0.5);
}

TEST_CASE("resonant weak field grows exponentially at rate a") {
    auto m = medium(1.0, 1.0, 0.4, 0.0);
    double c = 1.0;
    double a = m.small_signal_gain(c);
    double I0 = 1e-8 * m.saturation_scale();
    auto res = propagate_exact({std::sqrt(I0), 0.0}, m, c, 2.0 / a, 21);
    for (std::size_t i = 0; i < res.z.size(); ++i)
        CHECK(res.amp2[i] ==
              doctest::Approx(I0 * std::exp(a * res.z[i])).epsilon(1e-5));
}

TEST_CASE("exact propagation matches the implicit-relation bisection oracle") {
    auto m = medium(1.0, 1.0, 0.5, 0.5);
    double c = 1.0;
    double I0 = 1e-4 * m.gamma_perp * m.gamma_par;
    auto res = propagate_exact({std::sqrt(I0), 0.0}, m, c, 20.0, 41);
    for (std::size_t i = 0; i < res.z.size(); ++i) {
        double oracle = eqA_bisect(std::sqrt(I0), m, c, res.z[i]);
        CHECK(std::sqrt(res.amp2[i]) ==
              doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("zero input field in an inverted medium stays zero with a warning") {
    auto m = medium(1.0, 1.0, 0.8, 0.0);
    auto res = propagate_exact({0.0, 0.0}, m, 1.0, 3.0, 5);
    CHECK(res.trivial_zero_field);
    for (double a2 : res.amp2) CHECK(a2 == 0.0);
    auto res2 = propagate_exact({0.0, 0.0}, medium(1.0, 1.0, -0.8, 0.0), 1.0,
                                3.0, 5);
    CHECK(!res2.trivial_zero_field);
}

TEST_CASE("solve_implicit") {
    SUBCASE("identity at z = 0") {
        auto m = medium(1.3, 0.9, 0.6, 0.2);
        CHECK(solve_implicit(0.37, m, 1.0, 0.0) == 0.37);
    }
    SUBCASE("absorber decays with log-slope a/2 at resonance") {
        auto m = medium(1.0, 1.0, -0.5, 0.0);
        double c = 1.0;
        double a = m.small_signal_gain(c); // negative
        double z1 = 40.0, z2 = 60.0;
        double A1 = solve_implicit(0.05, m, c, z1);
        double A2 = solve_implicit(0.05, m, c, z2);
        CHECK(A2 < A1);
        double slope = (std::log(A2) - std::log(A1)) / (z2 - z1);
        CHECK(slope == doctest::Approx(a / 2.0).epsilon(1e-6));
    }
    SUBCASE("agrees with exact propagation on a 100-point grid") {
        auto m = medium(1.0, 0.8, 0.7, 1.0);
        double c = 2.0;
        double A0 = 0.02;
        auto res = propagate_exact({A0, 0.0}, m, c, 30.0, 100);
        for (std::size_t i = 0; i < res.z.size(); ++i) {
            double A = solve_implicit(A0, m, c, res.z[i]);
            CHECK(std::sqrt(res.amp2[i]) == doctest::Approx(A).epsilon(1e-8));
        }
    }
    SUBCASE("rejects non-positive input amplitude") {
        auto m = medium(1.0, 1.0, 0.5, 0.0);
        CHECK_THROWS_AS(solve_implicit(0.0, m, 1.0, 1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("weak field closed form") {
    SUBCASE("a z = ln 4 quadruples the resonant intensity") {
        auto m = medium(1.0, 1.0, 0.5, 0.0);
        double c = 1.0;
        double a = m.small_signal_gain(c);
        double I0 = 1e-10;
        double I = std::norm(weak_field({std::sqrt(I0), 0.0}, m, c,
                                        std::log(4.0) / a));
        CHECK(I == doctest::Approx(4.0 * I0).epsilon(1e-12));
    }
    SUBCASE("one penetration depth attenuates by 1/e") {
        auto m = medium(1.0, 1.0, -0.3, 0.0);
        double c = 1.0;
        double a = m.small_signal_gain(c);
        double I = std::norm(weak_field({1e-5, 0.0}, m, c, 1.0 / std::abs(a)));
        CHECK(I == doctest::Approx(1e-10 * std::exp(-1.0)).epsilon(1e-12));
    }
    SUBCASE("at Delta = 1 the phase grows as fast as the log-amplitude") {
        auto m = medium(2.0, 1.0, 0.5, 2.0); // Delta = 1
        double c = 1.0;
        std::complex<double> a0{1e-6, 0.0};
        auto az = weak_field(a0, m, c, 3.0);
        double log_growth = std::log(std::abs(az) / std::abs(a0));
        double arg_growth = std::arg(az / a0);
        CHECK(arg_growth == doctest::Approx(log_growth).epsilon(1e-12));
    }
}

TEST_CASE("strong field closed form") {
    SUBCASE("transparent medium: constant") {
        auto m = medium(1.0, 1.0, 0.0, 0.0);
        CHECK(strong_field(123.0, m, 1.0, 9.0) == 123.0);
    }
    SUBCASE("added intensity is linear in z") {
        auto m = medium(1.0, 1.0, 0.5, 0.0);
        double I0 = 500.0;
        double d1 = strong_field(I0, m, 1.0, 2.0) - I0;
        double d2 = strong_field(I0, m, 1.0, 4.0) - I0;
        CHECK(d2 == doctest::Approx(2.0 * d1).epsilon(1e-14));
    }
    SUBCASE("exact solver approaches the saturated slope") {
        auto m = medium(1.0, 1.0, 0.6, 0.0);
        double c = 1.0;
        double a = m.small_signal_gain(c);
        double I0 = 2e3 * m.saturation_scale();
        double z_end = 1.0 / a;
        auto res = propagate_exact({std::sqrt(I0), 0.0}, m, c, z_end, 2);
        double slope = (res.amp2.back() - I0) / z_end;
        double expect = m.gamma_par * m.gamma_perp * a / 4.0;
        CHECK(slope == doctest::Approx(expect).epsilon(1e-3));
    }
}

TEST_CASE("phase law") {
    CHECK(phase_along(3.7, 0.0) == 0.0);
    CHECK(phase_along(1.0, 2.5) == 0.0);
    CHECK(phase_along(std::exp(1.0), 2.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(phase_along(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("phase locks to the amplitude along exact trajectories") {
    auto m = medium(1.0, 0.7, 0.5, 0.8);
    double c = 1.0;
    auto res = propagate_exact({1e-3, 0.0}, m, c, 15.0, 31);
    double Delta = m.Delta();
    for (std::size_t i = 1; i < res.z.size(); ++i) {
        double dphi = res.phase[i] - res.phase[0];
        double dlog = 0.5 * std::log(res.amp2[i] / res.amp2[0]);
        CHECK(dphi == doctest::Approx(Delta * dlog).epsilon(1e-10));
    }
}

TEST_CASE("refractive index") {
    auto m = medium(1.0, 1.0, 0.5, 0.0);
    double omega = 100.0;
    SUBCASE("unity on resonance") {
        CHECK(refractive_index(m, omega) == 1.0);
    }
    SUBCASE("n - 1 is odd in Delta") {
        for (double Delta : {0.3, 1.0, 2.5}) {
            auto mp = m, mm_ = m;
            mp.delta = Delta;
            mm_.delta = -Delta;
            CHECK(refractive_index(mp, omega) - 1.0 ==
                  doctest::Approx(-(refractive_index(mm_, omega) - 1.0))
                      .epsilon(1e-14));
        }
    }
    SUBCASE("largest deviation sits at Delta = +-1") {
        auto at = [&](double Delta) {
            auto md = m;
            md.delta = Delta;
            return std::abs(refractive_index(md, omega) - 1.0);
        };
        double peak = at(1.0);
        for (double Delta : {0.2, 0.6, 0.9, 1.1, 1.5, 3.0})
            CHECK(at(Delta) <= peak + 1e-15);
    }
}

TEST_CASE("amplitude growth sign follows the inversion sign") {
    for (double d0 : {-0.7, -0.1, 0.1, 0.7}) {
        auto m = medium(1.0, 1.0, d0, 0.4);
        auto res = propagate_exact({0.1, 0.0}, m, 1.0, 8.0, 17);
        for (std::size_t i = 1; i < res.amp2.size(); ++i) {
            if (d0 > 0.0) CHECK(res.amp2[i] > res.amp2[i - 1]);
            if (d0 < 0.0) CHECK(res.amp2[i] < res.amp2[i - 1]);
        }
    }
}

TEST_CASE("weak-field agreement window") {
    // The saturation correction to the weak-field exponential is
    // exp(-(I-I0)/I_sat), so the relative deviation tracks I/I_sat.
    auto m = medium(1.0, 1.0, 0.5, 0.3);
    double c = 1.0;
    double sat = m.saturation_scale();
    double I0 = 1e-6 * sat;
    std::complex<double> a0{std::sqrt(I0), 0.0};
    auto res = propagate_exact(a0, m, c, 25.0, 101);
    for (std::size_t i = 0; i < res.z.size(); ++i) {
        double approx = std::norm(weak_field(a0, m, c, res.z[i]));
        if (res.amp2[i] < 1e-4 * sat)
            CHECK(res.amp2[i] == doctest::Approx(approx).epsilon(1.1e-4));
        if (res.amp2[i] < 1e-2 * sat)
            CHECK(res.amp2[i] == doctest::Approx(approx).epsilon(1e-2));
    }
}

TEST_CASE("regime classification thresholds") {
    auto m = medium(1.0, 1.0, 0.5, 0.0);
    double sat = m.saturation_scale();
    CHECK(classify_regime(0.009 * sat, m) == FieldRegime::weak);
    CHECK(classify_regime(0.5 * sat, m) == FieldRegime::intermediate);
    CHECK(classify_regime(101.0 * sat, m) == FieldRegime::strong);
    auto md = medium(1.0, 1.0, 0.5, 50.0); // detuning raises the strong bar
    CHECK(classify_regime(101.0 * sat, md) == FieldRegime::intermediate);
}
