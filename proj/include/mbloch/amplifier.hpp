#pragma once

#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include "mbloch/params.hpp"

namespace mbloch {

// Single-pass amplification of a monochromatic beam: spatial evolution of
// the field magnitude and phase through a saturable two-level medium.

enum class FieldRegime { weak, intermediate, strong };

std::string to_string(FieldRegime r);

// Saturation-based classification of a local intensity |alpha|^2: weak if
// well below gamma_perp*gamma_par/4, strong if well above both that scale
// and the detuning scale delta^2*gamma_par/(4 gamma_perp).
FieldRegime classify_regime(double amp2, const MediumParams& m);

struct PropagationResult {
    std::vector<double> z;            // grid positions
    std::vector<double> amp2;         // |alpha(z)|^2
    std::vector<double> phase;        // phi(z) [rad]
    std::vector<FieldRegime> regime;  // per-point classification
    bool trivial_zero_field = false;  // alpha0 = 0 in an inverted medium
};

// Adaptive integration of the exact magnitude equation with the phase
// recovered from the amplitude ratio. n_points >= 2 equispaced samples on
// [0, z_end].
PropagationResult propagate_exact(std::complex<double> alpha0,
                                  const MediumParams& m, double c,
                                  double z_end, int n_points);

// |alpha(z)| as the root of the implicit single-pass relation
// (gp^2+delta^2) ln(A/A0) + 2(gp/gpar)(A^2 - A0^2) = gp d0 g z / c,
// bracketed and refined to 1e-12 relative.
double solve_implicit(double alpha0_mag, const MediumParams& m, double c,
                      double z);

// Weak-field (unsaturated) solution: exponential gain plus linear phase.
std::complex<double> weak_field(std::complex<double> alpha0,
                                const MediumParams& m, double c, double z);
bool weak_field_valid(double amp2, const MediumParams& m);

// Strong-field (fully saturated) intensity: linear growth in z.
double strong_field(double alpha0_mag2, const MediumParams& m, double c,
                    double z);
bool strong_field_valid(double amp2, const MediumParams& m);

// Phase accumulated while the amplitude changes by the given ratio:
// dphi = Delta * ln(|alpha(z)|/|alpha(0)|). On resonance there is none.
double phase_along(double alpha_mag_ratio, double Delta);

// Steady-state refractive index at carrier frequency omega:
// n = 1 + (d0 g / (gamma_perp omega)) * Delta/(1+Delta^2).
double refractive_index(const MediumParams& m, double omega);

// CSV export: z, |alpha|^2, phase, regime.
void write_csv(std::ostream& os, const PropagationResult& res);

} // namespace mbloch
