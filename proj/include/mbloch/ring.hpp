#pragma once

#include <complex>
#include <ostream>
#include <vector>

#include "mbloch/params.hpp"

namespace mbloch {

// Ring-laser steady state: boundary condition, output intensity, mode
// family with thresholds and pulled frequencies, intracavity profile.

// One round trip through the passive part of the cavity: attenuation by R
// and the propagation phase k L_c (monochromatic case, so the time delay
// drops out).
std::complex<double> apply_boundary(std::complex<double> alpha_exit,
                                    const CavityParams& cav, double k);

struct ExitIntensity {
    double value = 0.0;          // |alpha(L_m)|^2, clamped at zero
    bool below_threshold = false;
};

// |alpha(L_m)|^2 = (gpar gp / 4) (|ln R^2|/(1 - R^2)) (r - 1 - Delta^2).
// Negative values are clamped to zero and flagged.
ExitIntensity exit_intensity(double r, double Delta, const MediumParams& m,
                             const CavityParams& cav);

// Resonant special case Delta = 0 (same formula path).
ExitIntensity resonant_exit_intensity(double r, const MediumParams& m,
                                      const CavityParams& cav);

// |ln R^2|/(1 - R^2) with the removable singularity at R = 1 handled by a
// series expansion.
double loss_ratio(double R_squared);

struct LaserOperatingPoint {
    int n = 0;                 // longitudinal mode index relative to omega_c
    double omega_n = 0.0;      // pulled lasing frequency
    double r_on = 1.0;         // threshold pump for this mode
    double exit_intensity = 0.0;
    double Delta = 0.0;        // (omega_n - omega_21)/gamma_perp
    bool degenerate = false;   // ties another mode's threshold exactly
};

// Frequency family omega_n and per-mode thresholds for n in
// [n_min, n_max], sorted by increasing threshold (n = 0 first among ties).
// Requires |omega_c - omega_21| below the free spectral range.
std::vector<LaserOperatingPoint> mode_family(const MediumParams& m,
                                             const CavityParams& cav,
                                             double omega_c, double omega_21,
                                             int n_min, int n_max);

struct IntensityProfile {
    std::vector<double> z;    // positions in [0, L_m]
    std::vector<double> amp2; // |alpha(z)|^2
};

// Intracavity intensity along the medium, from the per-point implicit
// relation with the boundary ratio |alpha(0)|^2 = R^2 |alpha(L_m)|^2.
// Throws regime_error below threshold (r <= 1 + Delta^2).
IntensityProfile intensity_profile(double r, double Delta,
                                   const MediumParams& m,
                                   const CavityParams& cav, int n_points);

void write_csv(std::ostream& os, const IntensityProfile& profile,
               const MediumParams& m);

} // namespace mbloch
