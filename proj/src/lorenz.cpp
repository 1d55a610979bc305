#include "mbloch/lorenz.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mbloch/csv.hpp"
#include "mbloch/errors.hpp"

namespace mbloch {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void real_rhs(const SingleModeParams& p, const double* y, double* dy) {
    dy[0] = p.kappa * (y[1] - y[0]);
    dy[1] = p.gamma_perp * (y[0] * y[2] - y[1]);
    dy[2] = p.gamma_par * (p.r - y[2] - y[0] * y[1]);
}

// Jacobian of the real system at (E, P, D).
void real_jacobian(const SingleModeParams& p, const LorenzState& s,
                   double J[3][3]) {
    J[0][0] = -p.kappa;           J[0][1] = p.kappa;            J[0][2] = 0.0;
    J[1][0] = p.gamma_perp * s.D; J[1][1] = -p.gamma_perp;      J[1][2] = p.gamma_perp * s.E;
    J[2][0] = -p.gamma_par * s.P; J[2][1] = -p.gamma_par * s.E; J[2][2] = -p.gamma_par;
}

// Roots of lambda^3 + c2 lambda^2 + c1 lambda + c0 with real coefficients:
// one real root from the depressed cubic (Newton-polished), the other two
// from the deflated quadratic.
std::array<std::complex<double>, 3> solve_cubic(double c2, double c1,
                                                double c0) {
    double p = c1 - c2 * c2 / 3.0;
    double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    double disc = 0.25 * q * q + p * p * p / 27.0;

    double t;
    if (disc >= 0.0) {
        double s = std::sqrt(disc);
        double u = -0.5 * q + (q <= 0.0 ? s : -s); // larger-magnitude branch
        double A = std::cbrt(u);
        double B = (A != 0.0) ? -p / (3.0 * A) : 0.0;
        t = A + B;
    } else {
        double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        t = m * std::cos(std::acos(arg) / 3.0);
    }
    double lr = t - c2 / 3.0;

    // Newton polish on the full cubic.
    for (int it = 0; it < 4; ++it) {
        double f = ((lr + c2) * lr + c1) * lr + c0;
        double df = (3.0 * lr + 2.0 * c2) * lr + c1;
        if (df == 0.0) break;
        lr -= f / df;
    }

    double B = c2 + lr;
    double C = c1 + lr * B;
    double disc2 = B * B - 4.0 * C;
    std::array<std::complex<double>, 3> roots;
    roots[0] = lr;
    if (disc2 >= 0.0) {
        double s = std::sqrt(disc2);
        double x1 = (B >= 0.0) ? (-B - s) / 2.0 : (-B + s) / 2.0;
        double x2 = (x1 != 0.0) ? C / x1 : -B - x1;
        roots[1] = x1;
        roots[2] = x2;
    } else {
        double re = -B / 2.0;
        double im = std::sqrt(-disc2) / 2.0;
        roots[1] = {re, im};
        roots[2] = {re, -im};
    }
    return roots;
}

} // namespace

void SingleModeParams::validate() const {
    require(kappa > 0.0 && gamma_perp > 0.0 && gamma_par > 0.0,
            "SingleModeParams: rates must be > 0");
    require(r >= 0.0, "SingleModeParams: r must be >= 0");
    require(std::isfinite(Delta_c), "SingleModeParams: Delta_c must be finite");
}

LorenzTrajectory integrate_real(const LorenzState& state0,
                                const SingleModeParams& p, double t_end,
                                const ode::Options& opts) {
    p.validate();
    auto rhs = [&](double, const std::vector<double>& y,
                   std::vector<double>& dy) {
        real_rhs(p, y.data(), dy.data());
    };
    auto raw = ode::integrate(rhs, {state0.E, state0.P, state0.D}, 0.0, t_end,
                              opts);
    LorenzTrajectory traj;
    traj.times = std::move(raw.times);
    traj.status = raw.status;
    traj.message = std::move(raw.message);
    traj.states.reserve(raw.states.size());
    for (const auto& y : raw.states) traj.states.push_back({y[0], y[1], y[2]});
    return traj;
}

ComplexModeTrajectory integrate_complex(const ComplexModeState& state0,
                                        const SingleModeParams& p,
                                        double t_end,
                                        const ode::Options& opts) {
    p.validate();
    auto rhs = [&](double, const std::vector<double>& y,
                   std::vector<double>& dy) {
        std::complex<double> F(y[0], y[1]), P(y[2], y[3]);
        double D = y[4];
        std::complex<double> dF = p.kappa * (P - F);
        std::complex<double> dP =
            p.gamma_perp *
            (F * D - std::complex<double>(1.0, p.Delta_c) * P);
        double dD = p.gamma_par * (p.r - D - std::real(F * std::conj(P)));
        dy[0] = dF.real();
        dy[1] = dF.imag();
        dy[2] = dP.real();
        dy[3] = dP.imag();
        dy[4] = dD;
    };
    auto raw = ode::integrate(rhs,
                              {state0.F.real(), state0.F.imag(),
                               state0.P.real(), state0.P.imag(), state0.D},
                              0.0, t_end, opts);
    ComplexModeTrajectory traj;
    traj.times = std::move(raw.times);
    traj.status = raw.status;
    traj.message = std::move(raw.message);
    traj.states.reserve(raw.states.size());
    for (const auto& y : raw.states)
        traj.states.push_back({std::complex<double>(y[0], y[1]),
                               std::complex<double>(y[2], y[3]), y[4]});
    return traj;
}

LorenzCoordinates to_lorenz_coordinates(const SingleModeParams& p) {
    require(p.gamma_perp > 0.0, "to_lorenz_coordinates: gamma_perp must be > 0");
    return {p.kappa / p.gamma_perp, p.gamma_par / p.gamma_perp, p.r};
}

Xyz to_xyz(const LorenzState& s, double r) { return {s.E, s.P, r - s.D}; }

LorenzState from_xyz(const Xyz& s, double r) { return {s.x, s.y, r - s.z}; }

std::vector<LorenzState> fixed_points(const SingleModeParams& p) {
    p.validate();
    std::vector<LorenzState> pts;
    pts.push_back({0.0, 0.0, p.r});
    if (p.r >= 1.0) {
        double e = std::sqrt(p.r - 1.0);
        pts.push_back({e, e, 1.0});
        pts.push_back({-e, -e, 1.0});
    }
    return pts;
}

HopfThreshold hopf_threshold(const SingleModeParams& p) {
    require(p.kappa > 0.0 && p.gamma_perp > 0.0 && p.gamma_par >= 0.0,
            "hopf_threshold: kappa, gamma_perp > 0 and gamma_par >= 0 required");
    double bad = p.kappa - p.gamma_perp - p.gamma_par;
    if (bad == 0.0) return {HopfThreshold::Kind::divergent, 0.0};
    if (bad < 0.0) return {HopfThreshold::Kind::stable_for_all_r, 0.0};
    double r_hb =
        p.kappa * (p.kappa + 3.0 * p.gamma_perp + p.gamma_par) / bad;
    return {HopfThreshold::Kind::threshold, r_hb};
}

std::string to_string(StabilityReport::Verdict v) {
    switch (v) {
    case StabilityReport::Verdict::stable: return "stable";
    case StabilityReport::Verdict::unstable: return "unstable";
    case StabilityReport::Verdict::marginal: return "marginal";
    }
    return "unknown";
}

StabilityReport jacobian_stability(const SingleModeParams& p,
                                   const LorenzState& point) {
    p.validate();
    double f[3];
    double y[3] = {point.E, point.P, point.D};
    real_rhs(p, y, f);
    double rate = std::max({p.kappa, p.gamma_perp, p.gamma_par});
    double scale = rate * std::max({1.0, std::abs(point.E), std::abs(point.P),
                                    std::abs(point.D)});
    double res = std::max({std::abs(f[0]), std::abs(f[1]), std::abs(f[2])});
    if (res > 1e-10 * scale)
        throw std::invalid_argument(
            "jacobian_stability: input is not a fixed point");

    // Characteristic cubic lambda^3 + c2 l^2 + c1 l + c0 of the Jacobian.
    double J[3][3];
    real_jacobian(p, point, J);
    double c2 = -(J[0][0] + J[1][1] + J[2][2]);
    double m01 = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    double m02 = J[0][0] * J[2][2] - J[0][2] * J[2][0];
    double m12 = J[1][1] * J[2][2] - J[1][2] * J[2][1];
    double c1 = m01 + m02 + m12;
    double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                 J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                 J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
    double c0 = -det;

    StabilityReport rep;
    rep.eigenvalues = solve_cubic(c2, c1, c0);
    rep.max_real = std::max({rep.eigenvalues[0].real(),
                             rep.eigenvalues[1].real(),
                             rep.eigenvalues[2].real()});
    double margin = 1e-9 * p.gamma_perp;
    if (rep.max_real > margin)
        rep.verdict = StabilityReport::Verdict::unstable;
    else if (rep.max_real < -margin)
        rep.verdict = StabilityReport::Verdict::stable;
    else
        rep.verdict = StabilityReport::Verdict::marginal;
    return rep;
}

double lyapunov_max(const SingleModeParams& p, const LorenzState& state0,
                    double t_total, double t_transient,
                    const LyapunovOptions& opts) {
    p.validate();
    require(t_total > t_transient && t_transient >= 0.0,
            "lyapunov_max: need t_total > t_transient >= 0");

    // Joint system: trajectory plus one tangent vector.
    auto rhs = [&](double, const std::vector<double>& y,
                   std::vector<double>& dy) {
        real_rhs(p, y.data(), dy.data());
        double J[3][3];
        real_jacobian(p, {y[0], y[1], y[2]}, J);
        for (int i = 0; i < 3; ++i)
            dy[3 + i] = J[i][0] * y[3] + J[i][1] * y[4] + J[i][2] * y[5];
    };

    double v0[3] = {1.0, 0.0, 0.0};
    if (opts.seed != 0) {
        std::mt19937_64 rng(opts.seed);
        std::normal_distribution<double> gauss;
        double norm = 0.0;
        for (double& v : v0) {
            v = gauss(rng);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        for (double& v : v0) v /= norm;
    }

    std::vector<double> y{state0.E, state0.P, state0.D, v0[0], v0[1], v0[2]};
    ode::Options iopts;
    iopts.abs_tol = opts.abs_tol;
    iopts.rel_tol = opts.rel_tol;

    double dt = opts.renorm_interval_tau / p.gamma_perp;
    double t = 0.0;
    double t_stop = t_total / p.gamma_perp;
    double t_accum_from = t_transient / p.gamma_perp;
    double log_sum = 0.0;
    double state_bound = opts.divergence_limit * std::max(1.0, p.r);

    while (t < t_stop) {
        double t_next = std::min(t + dt, t_stop);
        // Align one segment boundary with the end of the transient so the
        // accumulated logs cover exactly [t_transient, t_total].
        if (t < t_accum_from && t_next > t_accum_from) t_next = t_accum_from;
        auto res = ode::advance(rhs, y, t, t_next, iopts);
        if (res.status != ode::Status::ok)
            throw std::runtime_error("lyapunov_max: " + res.message);
        y = std::move(res.y);
        t = t_next;
        if (std::abs(y[0]) > state_bound || std::abs(y[1]) > state_bound ||
            std::abs(y[2]) > state_bound)
            throw std::runtime_error("lyapunov_max: divergent trajectory");
        double norm =
            std::sqrt(y[3] * y[3] + y[4] * y[4] + y[5] * y[5]);
        if (norm == 0.0)
            throw std::runtime_error("lyapunov_max: tangent vector vanished");
        if (t > t_accum_from) log_sum += std::log(norm);
        y[3] /= norm;
        y[4] /= norm;
        y[5] /= norm;
    }
    double tau_span = t_total - t_transient;
    return log_sum / tau_span;
}

double three_level_instability_ratio(double G, double r_on, double r_hb) {
    require(r_on > 0.0 && r_hb > r_on,
            "three_level_instability_ratio: need 0 < r_on < r_hb");
    if (!(G > r_hb))
        throw regime_error(
            "three_level_instability_ratio: instability unreachable: "
            "required d0 exceeds attainable range (G <= r_HB)");
    // Invert d0 = (R - g21)/(R + g21) at d0 = r_on/G and r_hb/G.
    return (G + r_hb) * (G - r_on) / ((G - r_hb) * (G + r_on));
}

void write_csv(std::ostream& os, const LorenzTrajectory& traj,
               double gamma_perp) {
    std::vector<std::string> names{"tau", "E", "P", "D"};
    csv::header(os, names);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& s = traj.states[i];
        double vals[] = {traj.times[i] * gamma_perp, s.E, s.P, s.D};
        csv::row(os, vals);
    }
}

void write_csv(std::ostream& os, const ComplexModeTrajectory& traj,
               double gamma_perp) {
    std::vector<std::string> names{"tau", "re_F", "im_F", "re_P", "im_P", "D"};
    csv::header(os, names);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& s = traj.states[i];
        double vals[] = {traj.times[i] * gamma_perp, s.F.real(), s.F.imag(),
                         s.P.real(), s.P.imag(), s.D};
        csv::row(os, vals);
    }
}

} // namespace mbloch
