#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "mbloch/lorenz.hpp"
#include "mbloch/multimode.hpp"

using namespace mbloch;

namespace {

using C = std::complex<double>;
constexpr double pi = std::numbers::pi;

// Direct evaluation of the mode sum at arbitrary z.
C eval_spectrum(const ModeSpectrum& s, double z) {
    C acc{0.0, 0.0};
    for (std::size_t i = 0; i < s.m.size(); ++i)
        acc += s.coeff[i] * std::polar(1.0, s.q[i] * z);
    return acc;
}

double l2_norm(const std::vector<C>& v) {
    double sum = 0.0;
    for (const auto& x : v) sum += std::norm(x);
    return std::sqrt(sum);
}

} // namespace

TEST_CASE("constant field populates only the m = 0 mode") {
    auto f = FieldOnRing::uniform({0.7, -0.2}, 32, 2.0, 3.0, 1.0);
    auto spec = mode_decompose(f);
    for (std::size_t i = 0; i < spec.m.size(); ++i) {
        if (spec.m[i] == 0)
            CHECK(std::abs(spec.coeff[i] - C{0.7, -0.2}) < 1e-14);
        else
            CHECK(std::abs(spec.coeff[i]) < 1e-14);
    }
}

TEST_CASE("single harmonic lands in a single coefficient") {
    double L_m = 2.0;
    FieldOnRing f;
    f.L_m = L_m;
    f.L_c = 2.5;
    f.c = 1.0;
    f.samples.resize(64);
    double q3 = 2.0 * pi * 3.0 / L_m;
    for (std::size_t j = 0; j < 64; ++j) {
        double z = L_m * static_cast<double>(j) / 64.0;
        f.samples[j] = std::polar(1.0, q3 * z);
    }
    auto spec = mode_decompose(f);
    for (std::size_t i = 0; i < spec.m.size(); ++i) {
        if (spec.m[i] == 3) {
            CHECK(std::abs(spec.coeff[i]) == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(spec.q[i] == doctest::Approx(q3));
            CHECK(spec.k_phys[i] == doctest::Approx(2.0 * pi * 3.0 / f.L_c));
            CHECK(spec.omega[i] == doctest::Approx(3.0 * 2.0 * pi * f.c / f.L_c));
        } else {
            CHECK(std::abs(spec.coeff[i]) < 1e-13);
        }
    }
}

TEST_CASE("decompose/reconstruct round trip is exact to 1e-12") {
    FieldOnRing f;
    f.L_m = 1.0;
    f.L_c = 1.4;
    f.c = 2.0;
    f.samples.resize(128);
    for (std::size_t j = 0; j < 128; ++j) {
        double z = static_cast<double>(j) / 128.0;
        f.samples[j] = C{std::sin(2.0 * pi * z), std::cos(6.0 * pi * z)} +
                       C{0.3, 0.0} * std::polar(1.0, 8.0 * pi * z);
    }
    auto back = mode_reconstruct(mode_decompose(f));
    double peak = 0.0;
    for (const auto& x : f.samples) peak = std::max(peak, std::abs(x));
    for (std::size_t j = 0; j < f.samples.size(); ++j)
        CHECK(std::abs(back.samples[j] - f.samples[j]) < 1e-12 * peak);
}

TEST_CASE("empty-cavity mode frequencies") {
    CavityParams cav;
    cav.R = 0.9;
    cav.L_m = 1.0;
    cav.L_c = 2.0;
    cav.c = 3.0;
    auto om = empty_cavity_frequencies(cav, -2, 2);
    REQUIRE(om.size() == 5);
    CHECK(om[2] == 0.0);
    double spacing = om[3] - om[2];
    CHECK(spacing == doctest::Approx(2.0 * pi * cav.c / cav.L_c));
    for (std::size_t i = 1; i < om.size(); ++i)
        CHECK(om[i] - om[i - 1] == doctest::Approx(spacing));

    cav.L_c *= 2.0;
    auto om2 = empty_cavity_frequencies(cav, -2, 2);
    CHECK(om2[3] - om2[2] == doctest::Approx(spacing / 2.0));
}

TEST_CASE("grid size must be a power of two") {
    FieldOnRing f;
    f.samples.assign(12, C{1.0, 0.0});
    CHECK_THROWS_WITH_AS(f.validate(),
                         doctest::Contains("power of two"),
                         std::invalid_argument);
}

TEST_CASE("unresolved initial data is rejected with a larger grid suggestion") {
    FieldOnRing f;
    f.L_m = f.L_c = f.c = 1.0;
    f.samples.resize(8);
    for (std::size_t j = 0; j < 8; ++j)
        f.samples[j] = std::polar(1.0, 2.0 * pi * 3.0 * j / 8.0);
    SingleModeParams p;
    CHECK_THROWS_WITH_AS(
        integrate_traveling_wave(f, std::vector<C>(8), std::vector<double>(8),
                                 p, 1.0),
        doctest::Contains("n_z = 16"), std::invalid_argument);
}

TEST_CASE("uniform initial data reproduces the single-mode system pointwise") {
    SingleModeParams p;
    p.kappa = 2.0;
    p.gamma_perp = 1.0;
    p.gamma_par = 1.0;
    p.r = 3.0;
    p.Delta_c = 0.3;

    C F0{0.4, 0.1}, P0{0.1, -0.05};
    double D0 = 2.0, t_end = 5.0;

    auto ring = FieldOnRing::uniform(F0, 16, 1.0, 1.5, 1.0);
    auto tw = integrate_traveling_wave(ring, std::vector<C>(16, P0),
                                       std::vector<double>(16, D0), p, t_end);
    REQUIRE(tw.status == ode::Status::ok);

    auto sm = integrate_complex({F0, P0, D0}, p, t_end);

    const auto& Ff = tw.F.back();
    const auto& Pf = tw.P.back();
    const auto& Df = tw.D.back();
    for (std::size_t j = 0; j < Ff.size(); ++j) {
        CHECK(std::abs(Ff[j] - sm.back().F) < 1e-7);
        CHECK(std::abs(Pf[j] - sm.back().P) < 1e-7);
        CHECK(std::abs(Df[j] - sm.back().D) < 1e-7);
    }

    // Nothing leaks out of the m = 0 mode.
    FieldOnRing final_field;
    final_field.samples = Ff;
    final_field.L_m = ring.L_m;
    final_field.L_c = ring.L_c;
    final_field.c = ring.c;
    auto spec = mode_decompose(final_field);
    for (std::size_t i = 0; i < spec.m.size(); ++i)
        if (spec.m[i] != 0) CHECK(std::abs(spec.coeff[i]) < 1e-10);
}

TEST_CASE("matter decoupled: exact free transport of the field pattern") {
    double L_m = 2.0, L_c = 4.0, c = 1.0;
    std::size_t n = 64;
    FieldOnRing f;
    f.L_m = L_m;
    f.L_c = L_c;
    f.c = c;
    f.samples.resize(n);
    double q1 = 2.0 * pi / L_m, q2 = 4.0 * pi / L_m;
    auto pattern = [&](double z) {
        return std::polar(1.0, q1 * z) + C{0.5, 0.0} * std::polar(0.4, -q2 * z);
    };
    for (std::size_t j = 0; j < n; ++j)
        f.samples[j] = pattern(L_m * static_cast<double>(j) / n);

    SingleModeParams p;
    p.kappa = p.gamma_perp = p.gamma_par = 0.0;
    p.r = 0.0;

    double t_end = 3.123; // shift v t is not a grid multiple
    auto tw = integrate_traveling_wave(f, std::vector<C>(n),
                                       std::vector<double>(n), p, t_end);
    double v = f.v();
    for (std::size_t j = 0; j < n; ++j) {
        double z = L_m * static_cast<double>(j) / n;
        double zs = std::fmod(z - v * t_end, L_m);
        if (zs < 0.0) zs += L_m;
        CHECK(std::abs(tw.F.back()[j] - pattern(zs)) < 1e-10);
    }

    // Advection is unitary: the spatial norm is conserved.
    CHECK(l2_norm(tw.F.back()) ==
          doctest::Approx(l2_norm(f.samples)).epsilon(1e-12));
}

TEST_CASE("resonant uniform lasing state is stationary") {
    SingleModeParams p;
    p.kappa = 1.2;
    p.gamma_perp = 1.0;
    p.gamma_par = 0.9;
    p.r = 2.5;
    double e = std::sqrt(p.r - 1.0);
    auto f = FieldOnRing::uniform({e, 0.0}, 16, 1.0, 1.3, 1.0);
    auto tw = integrate_traveling_wave(f, std::vector<C>(16, C{e, 0.0}),
                                       std::vector<double>(16, 1.0), p, 10.0);
    for (const auto& v : tw.F.back()) CHECK(std::abs(v - C{e, 0.0}) < 1e-7);
    for (const auto& v : tw.D.back()) CHECK(v == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("periodic continuation is exact by representation") {
    FieldOnRing f;
    f.L_m = 1.0;
    f.L_c = 1.0;
    f.c = 1.0;
    f.samples.resize(32);
    for (std::size_t j = 0; j < 32; ++j)
        f.samples[j] = std::polar(1.0, 2.0 * pi * 2.0 * j / 32.0) +
                       C{0.0, 0.3};
    auto spec = mode_decompose(f);
    CHECK(std::abs(eval_spectrum(spec, 0.0) - eval_spectrum(spec, f.L_m)) <
          1e-12);
}
