#include "mbloch/amplifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mbloch/csv.hpp"
#include "mbloch/ode.hpp"
#include "mbloch/rootfind.hpp"

namespace mbloch {

namespace {

// d|alpha|/dz of the exact propagation equation. The saturation denominator
// is delta^2 + gp^2 + 4 gp |alpha|^2 / gpar, the form consistent with the
// two-level steady state.
double magnitude_rhs(double A, const MediumParams& m, double c) {
    double denom = m.delta * m.delta + m.gamma_perp * m.gamma_perp +
                   4.0 * m.gamma_perp * A * A / m.gamma_par;
    return m.gamma_perp * m.d0 * m.g / c * A / denom;
}

// Left side minus right side of the implicit single-pass relation.
double implicit_residual(double A, double A0, const MediumParams& m, double c,
                         double z) {
    double gp2 = m.gamma_perp * m.gamma_perp;
    return (gp2 + m.delta * m.delta) * std::log(A / A0) +
           2.0 * (m.gamma_perp / m.gamma_par) * (A * A - A0 * A0) -
           m.gamma_perp * m.d0 * m.g / c * z;
}

double implicit_residual_deriv(double A, const MediumParams& m) {
    double gp2 = m.gamma_perp * m.gamma_perp;
    return (gp2 + m.delta * m.delta) / A +
           4.0 * (m.gamma_perp / m.gamma_par) * A;
}

} // namespace

std::string to_string(FieldRegime r) {
    switch (r) {
    case FieldRegime::weak: return "weak";
    case FieldRegime::intermediate: return "intermediate";
    case FieldRegime::strong: return "strong";
    }
    return "unknown";
}

FieldRegime classify_regime(double amp2, const MediumParams& m) {
    double sat = m.saturation_scale();
    double detune_scale = m.delta * m.delta * m.gamma_par / (4.0 * m.gamma_perp);
    if (amp2 < 0.01 * sat) return FieldRegime::weak;
    if (amp2 > 100.0 * std::max(sat, detune_scale)) return FieldRegime::strong;
    return FieldRegime::intermediate;
}

PropagationResult propagate_exact(std::complex<double> alpha0,
                                  const MediumParams& m, double c,
                                  double z_end, int n_points) {
    m.validate();
    if (n_points < 2)
        throw std::invalid_argument("propagate_exact: n_points must be >= 2");
    if (!(z_end > 0.0))
        throw std::invalid_argument("propagate_exact: z_end must be > 0");
    if (!(c > 0.0))
        throw std::invalid_argument("propagate_exact: c must be > 0");

    PropagationResult res;
    res.z.resize(n_points);
    for (int i = 0; i < n_points; ++i)
        res.z[i] = z_end * static_cast<double>(i) / (n_points - 1);

    double A0 = std::abs(alpha0);
    if (A0 == 0.0) {
        // alpha = 0 is a stationary (for d0 > 0, unstable) solution.
        res.trivial_zero_field = m.d0 > 0.0;
        res.amp2.assign(n_points, 0.0);
        res.phase.assign(n_points, 0.0);
        res.regime.assign(n_points, FieldRegime::weak);
        return res;
    }

    double phi0 = std::arg(alpha0);
    double Delta = m.Delta();

    ode::Options opts;
    opts.abs_tol = 0.0; // pure relative control; A stays strictly positive
    opts.rel_tol = 1e-12;

    auto rhs = [&](double, const std::vector<double>& y,
                   std::vector<double>& dy) {
        dy[0] = magnitude_rhs(y[0], m, c);
    };

    std::vector<double> y{A0};
    double z = 0.0;
    for (int i = 0; i < n_points; ++i) {
        if (res.z[i] > z) {
            auto r = ode::advance(rhs, y, z, res.z[i], opts);
            if (r.status != ode::Status::ok)
                throw std::runtime_error("propagate_exact: " + r.message);
            y = std::move(r.y);
            z = res.z[i];
        }
        double A = y[0];
        res.amp2.push_back(A * A);
        res.phase.push_back(phi0 + phase_along(A / A0, Delta));
        res.regime.push_back(classify_regime(A * A, m));
    }
    return res;
}

double solve_implicit(double alpha0_mag, const MediumParams& m, double c,
                      double z) {
    m.validate();
    if (!(alpha0_mag > 0.0))
        throw std::invalid_argument("solve_implicit: alpha0_mag must be > 0");
    if (!(c > 0.0))
        throw std::invalid_argument("solve_implicit: c must be > 0");
    double az = m.small_signal_gain(c) * z;
    if (az == 0.0) return alpha0_mag;

    // The left side is strictly increasing in A, so the root is unique.
    // Lower bound from the largest possible decay rate, upper bound from
    // the weak-field growth rate plus a saturated-growth allowance.
    double lo = alpha0_mag * std::exp(std::min(0.0, std::max(az, -700.0)));
    double hi = alpha0_mag * std::exp(std::min(std::max(0.0, az), 700.0)) +
                m.gamma_par * m.gamma_perp * std::abs(az);

    auto f = [&](double A) { return implicit_residual(A, alpha0_mag, m, c, z); };
    auto df = [&](double A) { return implicit_residual_deriv(A, m); };

    // Weak-field solution as the initial guess.
    double guess = alpha0_mag *
                   std::exp(std::clamp(0.5 * az / (1.0 + m.Delta() * m.Delta()),
                                       -700.0, 700.0));
    return newton_bisect(f, df, lo, hi, guess, {1e-12, 200});
}

std::complex<double> weak_field(std::complex<double> alpha0,
                                const MediumParams& m, double c, double z) {
    m.validate();
    double a = m.small_signal_gain(c);
    double Delta = m.Delta();
    std::complex<double> exponent =
        0.5 * a / (1.0 + Delta * Delta) * std::complex<double>(1.0, Delta) * z;
    return alpha0 * std::exp(exponent);
}

bool weak_field_valid(double amp2, const MediumParams& m) {
    return amp2 < m.saturation_scale();
}

double strong_field(double alpha0_mag2, const MediumParams& m, double c,
                    double z) {
    m.validate();
    double a = m.small_signal_gain(c);
    return alpha0_mag2 + m.gamma_par * m.gamma_perp * a / 4.0 * z;
}

bool strong_field_valid(double amp2, const MediumParams& m) {
    return amp2 > m.saturation_scale() && amp2 > m.delta * m.delta;
}

double phase_along(double alpha_mag_ratio, double Delta) {
    if (!(alpha_mag_ratio > 0.0))
        throw std::invalid_argument("phase_along: amplitude ratio must be > 0");
    return Delta * std::log(alpha_mag_ratio);
}

double refractive_index(const MediumParams& m, double omega) {
    m.validate();
    if (!(omega > 0.0))
        throw std::invalid_argument("refractive_index: omega must be > 0");
    double Delta = m.Delta();
    return 1.0 + m.d0 * m.g / (m.gamma_perp * omega) * Delta /
                     (1.0 + Delta * Delta);
}

void write_csv(std::ostream& os, const PropagationResult& res) {
    std::vector<std::string> names{"z", "amp2", "phase", "regime"};
    csv::header(os, names);
    for (std::size_t i = 0; i < res.z.size(); ++i) {
        double vals[] = {res.z[i], res.amp2[i], res.phase[i]};
        csv::row(os, vals, to_string(res.regime[i]));
    }
}

} // namespace mbloch
