#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "mbloch/ode.hpp"

namespace mbloch {

// Single-mode laser in the uniform field limit and its Lorenz form.

struct SingleModeParams {
    double kappa = 1.0;      // cavity damping rate
    double gamma_perp = 1.0;
    double gamma_par = 1.0;
    double r = 1.0;          // dimensionless pump
    double Delta_c = 0.0;    // atom-cavity detuning (omega_c - omega_21)/gp

    void validate() const; // all rates > 0, r >= 0
};

// Real system at resonance: E field, P polarization, D inversion.
struct LorenzState {
    double E = 0.0, P = 0.0, D = 0.0;
};

// Complex detuned parent system (5 real dimensions).
struct ComplexModeState {
    std::complex<double> F{0.0, 0.0};
    std::complex<double> P{0.0, 0.0};
    double D = 0.0;
};

struct LorenzTrajectory {
    std::vector<double> times;
    std::vector<LorenzState> states;
    ode::Status status = ode::Status::ok;
    std::string message;

    const LorenzState& back() const { return states.back(); }
};

struct ComplexModeTrajectory {
    std::vector<double> times;
    std::vector<ComplexModeState> states;
    ode::Status status = ode::Status::ok;
    std::string message;

    const ComplexModeState& back() const { return states.back(); }
};

LorenzTrajectory integrate_real(const LorenzState& state0,
                                const SingleModeParams& p, double t_end,
                                const ode::Options& opts = {});

ComplexModeTrajectory integrate_complex(const ComplexModeState& state0,
                                        const SingleModeParams& p,
                                        double t_end,
                                        const ode::Options& opts = {});

// Lorenz view: tau = gamma_perp t, (X, Y, Z) = (E, P, r - D),
// sigma = kappa/gamma_perp, b = gamma_par/gamma_perp.
struct LorenzCoordinates {
    double sigma, b, r;
};

struct Xyz {
    double x, y, z;
};

LorenzCoordinates to_lorenz_coordinates(const SingleModeParams& p);
Xyz to_xyz(const LorenzState& s, double r);
LorenzState from_xyz(const Xyz& s, double r);

// Stationary solutions of the real system: laser off (0, 0, r) always,
// and the lasing pair (+-sqrt(r-1), +-sqrt(r-1), 1) once r >= 1.
std::vector<LorenzState> fixed_points(const SingleModeParams& p);

struct HopfThreshold {
    enum class Kind { threshold, stable_for_all_r, divergent } kind;
    double r_hb = 0.0; // valid when kind == threshold

    // The threshold over all rate choices is minimized at gamma_par = 0,
    // kappa = 3 gamma_perp, where it equals 9.
    static constexpr double global_min = 9.0;
    static constexpr double global_min_kappa_over_gp = 3.0;
    static constexpr double global_min_gamma_par = 0.0;
};

// Pump at which the lasing solution destabilizes,
// r_HB = kappa (kappa + 3 gp + gpar) / (kappa - gp - gpar), defined only in
// the bad-cavity regime kappa > gp + gpar. gamma_par = 0 is accepted here
// (the boundary where the minimum is attained).
HopfThreshold hopf_threshold(const SingleModeParams& p);

struct StabilityReport {
    std::array<std::complex<double>, 3> eigenvalues;
    enum class Verdict { stable, unstable, marginal } verdict;
    double max_real = 0.0;
};

std::string to_string(StabilityReport::Verdict v);

// Eigenvalues of the analytic Jacobian of the real system at a fixed
// point, from the closed-form characteristic cubic. The verdict uses a
// margin of 1e-9 gamma_perp around zero. Rejects points that are not
// fixed points (residual above 1e-10 in rate units).
StabilityReport jacobian_stability(const SingleModeParams& p,
                                   const LorenzState& point);

struct LyapunovOptions {
    double renorm_interval_tau = 1.0; // tangent renormalization cadence
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    std::uint64_t seed = 0;           // 0 = deterministic default tangent
    double divergence_limit = 1e9;
};

// Largest Lyapunov exponent per tau = gamma_perp t, by tangent-vector
// growth with periodic renormalization. t_total and t_transient are in
// tau units; accumulation starts after the transient.
double lyapunov_max(const SingleModeParams& p, const LorenzState& state0,
                    double t_total, double t_transient = 1e3,
                    const LyapunovOptions& opts = {});

// Ratio of physical three-level pump rates R_HB/R_on needed to reach the
// instability versus the lasing threshold, for gain parameter G = r/d0.
// Defaults r_on = 1, r_hb = 9 give (G+9)(G-1)/((G+1)(G-9)).
double three_level_instability_ratio(double G, double r_on = 1.0,
                                     double r_hb = 9.0);

// CSV: tau, E, P, D (real) / tau, re_F, im_F, re_P, im_P, D (complex).
void write_csv(std::ostream& os, const LorenzTrajectory& traj,
               double gamma_perp);
void write_csv(std::ostream& os, const ComplexModeTrajectory& traj,
               double gamma_perp);

} // namespace mbloch
