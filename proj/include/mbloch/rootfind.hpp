#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

namespace mbloch {

struct RootOptions {
    double rel_tol = 1e-12;
    int max_iter = 200;
};

// Safeguarded Newton iteration on a bracketed root: Newton steps are taken
// from x0 whenever they stay inside the current bracket, otherwise the
// bracket is bisected. Requires f(lo) and f(hi) of opposite sign (or zero).
inline double newton_bisect(const std::function<double(double)>& f,
                            const std::function<double(double)>& df,
                            double lo, double hi, double x0,
                            const RootOptions& opts = {}) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "bracketing failure: f(%.17g) = %.6g, f(%.17g) = %.6g",
                      lo, flo, hi, fhi);
        throw std::runtime_error(buf);
    }
    // Orient so that f(lo) < 0 < f(hi).
    if (flo > 0.0) { std::swap(lo, hi); std::swap(flo, fhi); }

    double x = x0;
    if (!(x > std::min(lo, hi)) || !(x < std::max(lo, hi)))
        x = 0.5 * (lo + hi);

    for (int it = 0; it < opts.max_iter; ++it) {
        double fx = f(x);
        if (fx == 0.0) return x;
        if (fx < 0.0) lo = x; else hi = x;

        double d = df(x);
        double xn = (d != 0.0) ? x - fx / d : x;
        bool inside = (xn > std::min(lo, hi)) && (xn < std::max(lo, hi));
        double next = inside ? xn : 0.5 * (lo + hi);
        double dx = std::abs(next - x);
        x = next;
        if (dx <= opts.rel_tol * std::abs(x) ||
            std::abs(hi - lo) <= opts.rel_tol * std::abs(x))
            return x;
    }
    return x;
}

} // namespace mbloch
