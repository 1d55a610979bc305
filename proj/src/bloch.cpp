#include "mbloch/bloch.hpp"

#include <cmath>
#include <stdexcept>

#include "mbloch/csv.hpp"

namespace mbloch {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// The coherent population term i(alpha sigma12 - alpha* sigma21) is real:
// -2 Im(alpha sigma12).
double coherent_pump(Complex alpha, Complex sigma12) {
    return -2.0 * std::imag(alpha * sigma12);
}

} // namespace

void TwoLevelState::validate() const {
    require(std::abs(d) <= 1.0 + 1e-12, "TwoLevelState: |d| <= 1 required");
    require(std::abs(sigma12) <= 0.5 + 1e-12,
            "TwoLevelState: |sigma12| <= 1/2 required");
}

void ThreeLevelState::validate() const {
    require(rho11 >= -1e-12 && rho22 >= -1e-12 && rho33 >= -1e-12 &&
                rho11 <= 1.0 + 1e-12 && rho22 <= 1.0 + 1e-12 &&
                rho33 <= 1.0 + 1e-12,
            "ThreeLevelState: populations must lie in [0, 1]");
    require(std::abs(trace() - 1.0) <= 1e-9,
            "ThreeLevelState: populations must sum to 1");
}

void FourLevelState::validate() const {
    require(rho00 >= -1e-12 && rho11 >= -1e-12 && rho22 >= -1e-12 &&
                rho33 >= -1e-12 && rho00 <= 1.0 + 1e-12 &&
                rho11 <= 1.0 + 1e-12 && rho22 <= 1.0 + 1e-12 &&
                rho33 <= 1.0 + 1e-12,
            "FourLevelState: populations must lie in [0, 1]");
    require(std::abs(trace() - 1.0) <= 1e-9,
            "FourLevelState: populations must sum to 1");
}

void OpenTwoLevelRates::validate() const {
    require(lambda1 >= 0.0 && lambda2 >= 0.0 && gamma1 >= 0.0 &&
                gamma2 >= 0.0 && gamma12 >= 0.0 && gamma21 >= 0.0,
            "OpenTwoLevelRates: rates must be >= 0");
    require(gamma_perp > 0.0, "OpenTwoLevelRates: gamma_perp must be > 0");
}

TwoLevelTrajectory integrate_two_level(const TwoLevelState& state0,
                                       const DriveField& drive,
                                       const MediumParams& m, double t_end,
                                       const ode::Options& opts) {
    m.validate();
    state0.validate();
    require(opts.abs_tol > 0.0 && opts.rel_tol > 0.0,
            "integrate_two_level: tolerances must be > 0");

    auto rhs = [&](double t, const std::vector<double>& y,
                   std::vector<double>& dy) {
        Complex alpha = drive(t);
        Complex s12(y[1], y[2]);
        Complex ds12 = -(Complex(m.gamma_perp, m.delta)) * s12 +
                       Complex(0.0, 1.0) * std::conj(alpha) * y[0];
        dy[0] = m.gamma_par * (m.d0 - y[0]) + 2.0 * coherent_pump(alpha, s12);
        dy[1] = ds12.real();
        dy[2] = ds12.imag();
    };

    auto raw = ode::integrate(rhs,
                              {state0.d, state0.sigma12.real(),
                               state0.sigma12.imag()},
                              0.0, t_end, opts);
    TwoLevelTrajectory traj;
    traj.times = std::move(raw.times);
    traj.status = raw.status;
    traj.message = std::move(raw.message);
    traj.states.reserve(raw.states.size());
    for (const auto& y : raw.states)
        traj.states.push_back({y[0], Complex(y[1], y[2])});
    return traj;
}

TwoLevelSteady steady_state_two_level(Complex alpha, const MediumParams& m) {
    m.validate();
    double a2 = std::norm(alpha);
    double denom = m.delta * m.delta + m.gamma_perp * m.gamma_perp +
                   4.0 * m.gamma_perp * a2 / m.gamma_par;
    double d_s = m.d0 * (m.gamma_perp * m.gamma_perp + m.delta * m.delta) / denom;
    Complex sigma21 = m.d0 * alpha * Complex(m.delta, -m.gamma_perp) / denom;
    return {d_s, sigma21};
}

ThreeLevelTrajectory integrate_three_level(const ThreeLevelState& state0,
                                           const DriveField& drive,
                                           const ThreeLevelParams& p,
                                           double delta, double t_end,
                                           const ode::Options& opts) {
    p.validate();
    state0.validate();

    auto rhs = [&](double t, const std::vector<double>& y,
                   std::vector<double>& dy) {
        Complex alpha = drive(t);
        double rho11 = y[0], rho22 = y[1], rho33 = y[2];
        Complex s12(y[3], y[4]);
        double cp = coherent_pump(alpha, s12);
        dy[2] = -(p.gamma_31 + p.gamma_32) * rho33 + p.R_pump * (rho11 - rho33);
        dy[1] = -p.gamma_21 * rho22 + p.gamma_32 * rho33 + cp;
        dy[0] = p.gamma_21 * rho22 + p.gamma_31 * rho33 +
                p.R_pump * (rho33 - rho11) - cp;
        Complex ds12 = -(Complex(p.gamma_perp, delta)) * s12 +
                       Complex(0.0, 1.0) * std::conj(alpha) * (rho22 - rho11);
        dy[3] = ds12.real();
        dy[4] = ds12.imag();
    };

    auto raw = ode::integrate(rhs,
                              {state0.rho11, state0.rho22, state0.rho33,
                               state0.sigma12.real(), state0.sigma12.imag()},
                              0.0, t_end, opts);
    ThreeLevelTrajectory traj;
    traj.times = std::move(raw.times);
    traj.status = raw.status;
    traj.message = std::move(raw.message);
    traj.states.reserve(raw.states.size());
    for (const auto& y : raw.states)
        traj.states.push_back({y[0], y[1], y[2], Complex(y[3], y[4])});
    return traj;
}

FourLevelTrajectory integrate_four_level(const FourLevelState& state0,
                                         const DriveField& drive,
                                         const FourLevelParams& p,
                                         double delta, double t_end,
                                         const ode::Options& opts) {
    p.validate();
    state0.validate();

    auto rhs = [&](double t, const std::vector<double>& y,
                   std::vector<double>& dy) {
        Complex alpha = drive(t);
        double rho00 = y[0], rho11 = y[1], rho22 = y[2], rho33 = y[3];
        Complex s12(y[4], y[5]);
        double cp = coherent_pump(alpha, s12);
        dy[3] = -(p.gamma_30 + p.gamma_31 + p.gamma_32) * rho33 +
                p.R_pump * (rho00 - rho33);
        dy[2] = -(p.gamma_20 + p.gamma_21) * rho22 + p.gamma_32 * rho33 + cp;
        // Sign of the coherent term chosen to conserve the trace (the lower
        // lasing level gains what the upper one loses).
        dy[1] = -p.gamma_10 * rho11 + p.gamma_21 * rho22 + p.gamma_31 * rho33 -
                cp;
        dy[0] = p.gamma_10 * rho11 + p.gamma_20 * rho22 + p.gamma_30 * rho33 -
                p.R_pump * (rho00 - rho33);
        Complex ds12 = -(Complex(p.gamma_perp, delta)) * s12 +
                       Complex(0.0, 1.0) * std::conj(alpha) * (rho22 - rho11);
        dy[4] = ds12.real();
        dy[5] = ds12.imag();
    };

    auto raw = ode::integrate(rhs,
                              {state0.rho00, state0.rho11, state0.rho22,
                               state0.rho33, state0.sigma12.real(),
                               state0.sigma12.imag()},
                              0.0, t_end, opts);
    FourLevelTrajectory traj;
    traj.times = std::move(raw.times);
    traj.status = raw.status;
    traj.message = std::move(raw.message);
    traj.states.reserve(raw.states.size());
    for (const auto& y : raw.states)
        traj.states.push_back({y[0], y[1], y[2], y[3], Complex(y[4], y[5])});
    return traj;
}

OpenTwoLevelTrajectory integrate_open_two_level(const OpenTwoLevelState& state0,
                                                const DriveField& drive,
                                                const OpenTwoLevelRates& rates,
                                                double t_end,
                                                const ode::Options& opts) {
    rates.validate();

    auto rhs = [&](double t, const std::vector<double>& y,
                   std::vector<double>& dy) {
        Complex alpha = drive(t);
        double rho11 = y[0], rho22 = y[1];
        Complex s12(y[2], y[3]);
        double cp = coherent_pump(alpha, s12);
        dy[1] = rates.lambda2 - rates.gamma2 * rho22 + rates.gamma12 * rho11 +
                cp;
        dy[0] = rates.lambda1 - rates.gamma1 * rho11 + rates.gamma21 * rho22 -
                cp;
        Complex ds12 = -(Complex(rates.gamma_perp, rates.delta)) * s12 +
                       Complex(0.0, 1.0) * std::conj(alpha) * (rho22 - rho11);
        dy[2] = ds12.real();
        dy[3] = ds12.imag();
    };

    auto raw = ode::integrate(rhs,
                              {state0.rho11, state0.rho22,
                               state0.sigma12.real(), state0.sigma12.imag()},
                              0.0, t_end, opts);
    OpenTwoLevelTrajectory traj;
    traj.times = std::move(raw.times);
    traj.status = raw.status;
    traj.message = std::move(raw.message);
    traj.states.reserve(raw.states.size());
    for (const auto& y : raw.states)
        traj.states.push_back({y[0], y[1], Complex(y[2], y[3])});
    return traj;
}

double stimulated_rate(Complex alpha, double gamma_perp) {
    require(gamma_perp > 0.0, "stimulated_rate: gamma_perp must be > 0");
    return 2.0 * std::norm(alpha) / gamma_perp;
}

RatePopulations rate_equations_step(const RatePopulations& pops, double R_stim,
                                    const OpenTwoLevelRates& rates) {
    rates.validate();
    require(R_stim >= 0.0, "rate_equations_step: R_stim must be >= 0");
    double stim = R_stim * (pops.rho22 - pops.rho11);
    RatePopulations d;
    d.rho22 = rates.lambda2 - rates.gamma2 * pops.rho22 +
              rates.gamma12 * pops.rho11 - stim;
    d.rho11 = rates.lambda1 - rates.gamma1 * pops.rho11 +
              rates.gamma21 * pops.rho22 + stim;
    return d;
}

RateTrajectory integrate_rate_equations(const RatePopulations& pops0,
                                        const DriveField& drive,
                                        const OpenTwoLevelRates& rates,
                                        double t_end,
                                        const ode::Options& opts) {
    rates.validate();

    auto rhs = [&](double t, const std::vector<double>& y,
                   std::vector<double>& dy) {
        double R = stimulated_rate(drive(t), rates.gamma_perp);
        auto d = rate_equations_step({y[0], y[1]}, R, rates);
        dy[0] = d.rho11;
        dy[1] = d.rho22;
    };

    auto raw = ode::integrate(rhs, {pops0.rho11, pops0.rho22}, 0.0, t_end, opts);
    RateTrajectory traj;
    traj.times = std::move(raw.times);
    traj.status = raw.status;
    traj.message = std::move(raw.message);
    traj.states.reserve(raw.states.size());
    for (const auto& y : raw.states) traj.states.push_back({y[0], y[1]});
    return traj;
}

std::function<double(double)> adiabatic_expansion(const SmoothSignal& g,
                                                  double gamma, int order) {
    require(gamma > 0.0, "adiabatic_expansion: gamma must be > 0");
    require(order >= 0 && order <= 2, "adiabatic_expansion: order must be 0..2");
    require(static_cast<bool>(g.value), "adiabatic_expansion: signal missing");
    if (order >= 1) require(static_cast<bool>(g.deriv1),
                            "adiabatic_expansion: first derivative missing");
    if (order >= 2) require(static_cast<bool>(g.deriv2),
                            "adiabatic_expansion: second derivative missing");

    return [g, gamma, order](double t) {
        double f = g.value(t);
        if (order >= 1) f -= g.deriv1(t) / gamma;
        if (order >= 2) f += g.deriv2(t) / (gamma * gamma);
        return f / gamma;
    };
}

namespace {

template <typename Traj, typename Decoder>
void write_traj_csv(std::ostream& os, const Traj& traj,
                    std::vector<std::string> names, Decoder decode) {
    csv::header(os, names);
    std::vector<double> row(names.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        row[0] = traj.times[i];
        decode(traj.states[i], row);
        csv::row(os, row);
    }
}

} // namespace

void write_csv(std::ostream& os, const TwoLevelTrajectory& traj) {
    write_traj_csv(os, traj, {"t", "d", "re_sigma12", "im_sigma12"},
                   [](const TwoLevelState& s, std::vector<double>& r) {
                       r[1] = s.d;
                       r[2] = s.sigma12.real();
                       r[3] = s.sigma12.imag();
                   });
}

void write_csv(std::ostream& os, const ThreeLevelTrajectory& traj) {
    write_traj_csv(os, traj,
                   {"t", "rho11", "rho22", "rho33", "re_sigma12", "im_sigma12"},
                   [](const ThreeLevelState& s, std::vector<double>& r) {
                       r[1] = s.rho11;
                       r[2] = s.rho22;
                       r[3] = s.rho33;
                       r[4] = s.sigma12.real();
                       r[5] = s.sigma12.imag();
                   });
}

void write_csv(std::ostream& os, const FourLevelTrajectory& traj) {
    write_traj_csv(os, traj,
                   {"t", "rho00", "rho11", "rho22", "rho33", "re_sigma12",
                    "im_sigma12"},
                   [](const FourLevelState& s, std::vector<double>& r) {
                       r[1] = s.rho00;
                       r[2] = s.rho11;
                       r[3] = s.rho22;
                       r[4] = s.rho33;
                       r[5] = s.sigma12.real();
                       r[6] = s.sigma12.imag();
                   });
}

} // namespace mbloch
