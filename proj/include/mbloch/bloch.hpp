#pragma once

#include <complex>
#include <functional>
#include <ostream>
#include <vector>

#include "mbloch/ode.hpp"
#include "mbloch/params.hpp"

namespace mbloch {

using Complex = std::complex<double>;

// Prescribed driving field: the Rabi half-amplitude alpha(t), either a
// constant or an arbitrary (smooth, densely resolved) time signal.
class DriveField {
public:
    static DriveField constant(Complex alpha) {
        DriveField d;
        d.alpha_ = alpha;
        return d;
    }
    static DriveField signal(std::function<Complex(double)> f) {
        DriveField d;
        d.signal_ = std::move(f);
        return d;
    }
    static DriveField off() { return constant(0.0); }

    Complex operator()(double t) const { return signal_ ? signal_(t) : alpha_; }
    bool is_constant() const { return !signal_; }

private:
    Complex alpha_{0.0, 0.0};
    std::function<Complex(double)> signal_;
};

// ---------------------------------------------------------------------------
// Two-level medium with symmetric decay (population difference picture)

struct TwoLevelState {
    double d = -1.0;           // population inversion rho22 - rho11
    Complex sigma12{0.0, 0.0}; // slowly varying coherence

    void validate() const; // Bloch-sphere bounds |d| <= 1, |sigma12| <= 1/2
};

struct TwoLevelTrajectory {
    std::vector<double> times;
    std::vector<TwoLevelState> states;
    ode::Status status = ode::Status::ok;
    std::string message;

    const TwoLevelState& back() const { return states.back(); }
};

TwoLevelTrajectory integrate_two_level(const TwoLevelState& state0,
                                       const DriveField& drive,
                                       const MediumParams& m, double t_end,
                                       const ode::Options& opts = {});

struct TwoLevelSteady {
    double d_s;
    Complex sigma21_s;
};

// Saturated steady state under a constant drive.
TwoLevelSteady steady_state_two_level(Complex alpha, const MediumParams& m);

// ---------------------------------------------------------------------------
// Three-level scheme (pump 1->3, fast 3->2 transfer, lasing 2->1)

struct ThreeLevelState {
    double rho11 = 1.0, rho22 = 0.0, rho33 = 0.0;
    Complex sigma12{0.0, 0.0};

    double trace() const { return rho11 + rho22 + rho33; }
    double inversion() const { return rho22 - rho11; }
    void validate() const;
};

struct ThreeLevelTrajectory {
    std::vector<double> times;
    std::vector<ThreeLevelState> states;
    ode::Status status = ode::Status::ok;
    std::string message;

    const ThreeLevelState& back() const { return states.back(); }
};

ThreeLevelTrajectory integrate_three_level(const ThreeLevelState& state0,
                                           const DriveField& drive,
                                           const ThreeLevelParams& p,
                                           double delta, double t_end,
                                           const ode::Options& opts = {});

// ---------------------------------------------------------------------------
// Four-level scheme (pump 0->3, fast 3->2 and 1->0, lasing 2->1)

struct FourLevelState {
    double rho00 = 1.0, rho11 = 0.0, rho22 = 0.0, rho33 = 0.0;
    Complex sigma12{0.0, 0.0};

    double trace() const { return rho00 + rho11 + rho22 + rho33; }
    double inversion() const { return rho22 - rho11; }
    void validate() const;
};

struct FourLevelTrajectory {
    std::vector<double> times;
    std::vector<FourLevelState> states;
    ode::Status status = ode::Status::ok;
    std::string message;

    const FourLevelState& back() const { return states.back(); }
};

FourLevelTrajectory integrate_four_level(const FourLevelState& state0,
                                         const DriveField& drive,
                                         const FourLevelParams& p,
                                         double delta, double t_end,
                                         const ode::Options& opts = {});

// ---------------------------------------------------------------------------
// Open two-level system and its rate-equation limit

// General two-level relaxation/pumping scheme: each lasing level decays at
// gamma_i (internal transfer gamma_12, gamma_21 included) and is fed at a
// constant rate lambda_i by the pump.
struct OpenTwoLevelRates {
    double lambda1 = 0.0, lambda2 = 0.0;
    double gamma1 = 1.0, gamma2 = 1.0;
    double gamma12 = 0.0, gamma21 = 0.0;
    double gamma_perp = 1.0;
    double delta = 0.0;

    void validate() const;
};

struct OpenTwoLevelState {
    double rho11 = 1.0, rho22 = 0.0;
    Complex sigma12{0.0, 0.0};
};

struct OpenTwoLevelTrajectory {
    std::vector<double> times;
    std::vector<OpenTwoLevelState> states;
    ode::Status status = ode::Status::ok;
    std::string message;

    const OpenTwoLevelState& back() const { return states.back(); }
};

// Full pre-elimination equations (coherence kept).
OpenTwoLevelTrajectory integrate_open_two_level(const OpenTwoLevelState& state0,
                                                const DriveField& drive,
                                                const OpenTwoLevelRates& rates,
                                                double t_end,
                                                const ode::Options& opts = {});

struct RatePopulations {
    double rho11 = 1.0, rho22 = 0.0;
};

// Stimulated transition rate R = 2|alpha|^2/gamma_perp of the rate-equation
// limit.
double stimulated_rate(Complex alpha, double gamma_perp);

// Right-hand side of the rate equations (coherence adiabatically
// eliminated): d/dt of the two populations.
RatePopulations rate_equations_step(const RatePopulations& pops, double R_stim,
                                    const OpenTwoLevelRates& rates);

struct RateTrajectory {
    std::vector<double> times;
    std::vector<RatePopulations> states;
    ode::Status status = ode::Status::ok;
    std::string message;

    const RatePopulations& back() const { return states.back(); }
};

RateTrajectory integrate_rate_equations(const RatePopulations& pops0,
                                        const DriveField& drive,
                                        const OpenTwoLevelRates& rates,
                                        double t_end,
                                        const ode::Options& opts = {});

// ---------------------------------------------------------------------------
// Adiabatic elimination of a fast variable f' = -gamma f + g(t)

// A twice-differentiable scalar signal with analytic derivatives.
struct SmoothSignal {
    std::function<double(double)> value;
    std::function<double(double)> deriv1;
    std::function<double(double)> deriv2;
};

// Series solution f = (1/gamma)[g - g'/gamma + g''/gamma^2 - ...] truncated
// at `order` in {0, 1, 2}. The decaying homogeneous transient is dropped, so
// comparisons against the exact solution are meaningful only after several
// 1/gamma.
std::function<double(double)> adiabatic_expansion(const SmoothSignal& g,
                                                  double gamma, int order);

// ---------------------------------------------------------------------------
// CSV export: column 1 is time, then the state components in declared order.

void write_csv(std::ostream& os, const TwoLevelTrajectory& traj);
void write_csv(std::ostream& os, const ThreeLevelTrajectory& traj);
void write_csv(std::ostream& os, const FourLevelTrajectory& traj);

} // namespace mbloch
