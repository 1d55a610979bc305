#pragma once

#include <complex>
#include <ostream>
#include <vector>

#include "mbloch/lorenz.hpp"
#include "mbloch/ode.hpp"
#include "mbloch/params.hpp"

namespace mbloch {

// Traveling-wave field on the ring, with periodic continuation built into
// the representation: samples live at n_z equispaced points of [0, L_m) and
// F(L_m) is F(0) by construction. n_z must be a power of two.
struct FieldOnRing {
    std::vector<std::complex<double>> samples;
    double L_m = 1.0;
    double L_c = 1.0;
    double c = 1.0;

    double v() const { return c * L_m / L_c; } // advection speed
    std::size_t size() const { return samples.size(); }

    static FieldOnRing uniform(std::complex<double> value, std::size_t n_z,
                               double L_m, double L_c, double c);
    void validate() const;
};

// Discrete longitudinal-mode content of a ring field. q are the internal
// wavenumbers 2 pi m / L_m; the physical (undelayed-frame) wavenumbers are
// 2 pi m / L_c with angular frequencies omega = m 2 pi c / L_c.
struct ModeSpectrum {
    std::vector<int> m;                        // ascending, [-n/2, n/2)
    std::vector<std::complex<double>> coeff;
    std::vector<double> q;
    std::vector<double> k_phys;
    std::vector<double> omega;
    double L_m = 1.0, L_c = 1.0, c = 1.0;
};

ModeSpectrum mode_decompose(const FieldOnRing& field);
FieldOnRing mode_reconstruct(const ModeSpectrum& spectrum);

// Empty-cavity mode angular frequencies m 2 pi c / L_c for m in
// [m_min, m_max], relative to the carrier.
std::vector<double> empty_cavity_frequencies(const CavityParams& cav,
                                             int m_min, int m_max);

struct TravelingWaveTrajectory {
    std::vector<double> times;
    std::vector<std::vector<std::complex<double>>> F; // frames of field samples
    std::vector<std::vector<std::complex<double>>> P;
    std::vector<std::vector<double>> D;
    ode::Status status = ode::Status::ok;
    std::string message;
};

// Uniform-field-limit dynamics with the advection term treated exactly in
// mode space (integrating-factor pseudo-spectral scheme); only the local
// matter coupling is stepped adaptively. Pure transport (all rates zero)
// is therefore integrated exactly, and spatially uniform data reduce to
// the single-mode equations at every grid point.
//
// Rates of zero are accepted here (matter decoupled / lossless transport
// branch); p.r and p.Delta_c are used as in the single-mode system.
TravelingWaveTrajectory integrate_traveling_wave(
    const FieldOnRing& F0, const std::vector<std::complex<double>>& P0,
    const std::vector<double>& D0, const SingleModeParams& p, double t_end,
    const ode::Options& opts = {});

// CSV: one row per frame: t, then re/im F at each grid point.
void write_csv(std::ostream& os, const TravelingWaveTrajectory& traj);
void write_csv(std::ostream& os, const ModeSpectrum& spectrum);

} // namespace mbloch
