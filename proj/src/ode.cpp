#include "mbloch/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mbloch::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat (embedded 4th order error weights, including the FSAL stage).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
    const Rhs& f;
    Options opts;
    std::size_t n;
    std::vector<double> k1, k2, k3, k4, k5, k6, k7, ytmp, y5;
    double err_prev = 1.0;

    Stepper(const Rhs& f_, std::size_t n_, const Options& o)
        : f(f_), opts(o), n(n_), k1(n_), k2(n_), k3(n_), k4(n_), k5(n_),
          k6(n_), k7(n_), ytmp(n_), y5(n_) {}

    // One attempted step of size h from (t, y) with k1 = f(t, y) already
    // loaded. On success y5/k7 hold the new state and its derivative and
    // the scaled error estimate (err/h factored in) is returned.
    double attempt(double t, double h, const std::vector<double>& y) {
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                  a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                  a64 * k4[i] + a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                b5 * k5[i] + b6 * k6[i]);
        f(t + h, y5, k7); // FSAL
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                            e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double sc = opts.abs_tol +
                        opts.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            double q = e / sc;
            sum += q * q;
        }
        return std::sqrt(sum / static_cast<double>(n));
    }

    // PI controller factor (Hairer/Wanner style).
    double factor(double err, bool had_rejection) const {
        constexpr double alpha = 0.7 / 5.0, beta = 0.4 / 5.0;
        double fac = 0.9 * std::pow(std::max(err, 1e-30), -alpha) *
                     std::pow(std::max(err_prev, 1e-30), beta);
        double fmax = had_rejection ? 1.0 : 5.0;
        return std::clamp(fac, 0.2, fmax);
    }
};

double initial_step(const Rhs& f, const std::vector<double>& y0, double t0,
                    double span, const Options& opts) {
    if (opts.h_init > 0.0) return std::min(opts.h_init, span);
    std::size_t n = y0.size();
    std::vector<double> dy(n);
    f(t0, y0, dy);
    double ynorm = 0.0, fnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sc = opts.abs_tol + opts.rel_tol * std::abs(y0[i]);
        ynorm = std::max(ynorm, std::abs(y0[i]) / sc);
        fnorm = std::max(fnorm, std::abs(dy[i]) / sc);
    }
    double h = (fnorm > 1e-30) ? 0.01 * std::max(ynorm, 1.0) / fnorm
                               : 1e-3 * span;
    return std::clamp(h, 1e-12 * span, std::min(span, opts.h_max));
}

template <typename OnAccept>
Status run(const Rhs& f, std::vector<double>& y, double& t, double t_end,
           const Options& opts, std::string& message, OnAccept&& on_accept) {
    const std::size_t n = y.size();
    Stepper st(f, n, opts);
    double h = initial_step(f, y, t, t_end - t, opts);
    f(t, y, st.k1);
    on_accept(t, y, st.k1);

    std::size_t steps = 0;
    bool rejected = false;
    while (t < t_end) {
        if (++steps > opts.max_steps) {
            message = "maximum step count exceeded at t = " + std::to_string(t);
            return Status::max_steps;
        }
        h = std::min({h, opts.h_max, t_end - t});
        double h_floor = 16.0 * std::numeric_limits<double>::epsilon() *
                         std::max(std::abs(t), 1.0);
        if (h < h_floor) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "step size underflow (h = %.3e) at t = %.17g", h, t);
            message = buf;
            return Status::step_underflow;
        }
        double err = st.attempt(t, h, y);
        if (err <= 1.0) {
            t += h;
            y = st.y5;
            st.k1 = st.k7; // FSAL
            on_accept(t, y, st.k1);
            h *= st.factor(err, rejected);
            st.err_prev = std::max(err, 1e-4);
            rejected = false;
        } else {
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            rejected = true;
        }
    }
    return Status::ok;
}

} // namespace

std::vector<double> Trajectory::sample(double t) const {
    if (times.empty()) return {};
    if (t <= times.front()) return states.front();
    if (t >= times.back()) return states.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t j = static_cast<std::size_t>(it - times.begin());
    std::size_t i = j - 1;
    double h = times[j] - times[i];
    double s = (t - times[i]) / h;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    double h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s);
    double h11 = s * s * (s - 1);
    std::vector<double> out(states[i].size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = h00 * states[i][k] + h * h10 * derivs[i][k] +
                 h01 * states[j][k] + h * h11 * derivs[j][k];
    return out;
}

Trajectory integrate(const Rhs& f, std::vector<double> y0, double t0,
                     double t_end, const Options& opts) {
    Trajectory traj;
    double t = t0;
    traj.status = run(f, y0, t, t_end, opts, traj.message,
                      [&](double tt, const std::vector<double>& y,
                          const std::vector<double>& dy) {
                          traj.times.push_back(tt);
                          traj.states.push_back(y);
                          traj.derivs.push_back(dy);
                      });
    return traj;
}

Result advance(const Rhs& f, std::vector<double> y0, double t0, double t_end,
               const Options& opts) {
    Result res;
    res.t = t0;
    res.status = run(f, y0, res.t, t_end, opts, res.message,
                     [](double, const std::vector<double>&,
                        const std::vector<double>&) {});
    res.y = std::move(y0);
    return res;
}

} // namespace mbloch::ode
