#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace mbloch::ode {

// Right-hand side f(t, y) -> dydt. dydt is pre-sized to y.size().
using Rhs = std::function<void(double t, const std::vector<double>& y,
                               std::vector<double>& dydt)>;

struct Options {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double h_init = 0.0;   // 0 = choose automatically
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 100'000'000;
};

enum class Status { ok, step_underflow, max_steps };

// Final state only, no history.
struct Result {
    Status status = Status::ok;
    double t = 0.0;                 // time actually reached
    std::vector<double> y;          // last accepted state
    std::string message;
};

// Accepted steps of one integration, including the initial condition.
// Derivatives are kept so states can be resampled between steps with a
// cubic Hermite interpolant.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> derivs;
    Status status = Status::ok;
    std::string message;

    std::size_t size() const { return times.size(); }
    const std::vector<double>& back() const { return states.back(); }
    double t_back() const { return times.back(); }

    // Hermite-interpolated state at t (clamped to the covered interval).
    std::vector<double> sample(double t) const;
};

// Dormand-Prince 5(4) with PI step-size control. Integrates from t0 to
// t_end (t_end > t0), hitting t_end exactly. On step underflow the
// trajectory/result carries the last accepted state and a message.
Trajectory integrate(const Rhs& f, std::vector<double> y0, double t0,
                     double t_end, const Options& opts = {});

// Same stepper without storing the history.
Result advance(const Rhs& f, std::vector<double> y0, double t0, double t_end,
               const Options& opts = {});

} // namespace mbloch::ode
