#pragma once

#include <string>

namespace mbloch {

// Where an effective two-level parameter set came from.
enum class Provenance { native, three_level, four_level };

// Effective two-level medium. All rates must be given in one consistent
// unit system; the library itself is unit-agnostic (the CLI normalizes
// user input to gamma_perp = 1 units before building one of these).
struct MediumParams {
    double gamma_perp = 1.0; // coherence decay rate [1/time]
    double gamma_par = 1.0;  // population decay rate [1/time]
    double g = 1.0;          // radiation-matter coupling [1/time^2]
    double d0 = 0.0;         // unsaturated inversion, in [-1, 1]
    double delta = 0.0;      // detuning omega - omega_21 [1/time]
    Provenance provenance = Provenance::native;

    double Delta() const { return delta / gamma_perp; }
    // Weak-field gain (d0 > 0) or absorption (d0 < 0) per unit length.
    double small_signal_gain(double c) const {
        return 2.0 * d0 * g / (c * gamma_perp);
    }
    // Saturation intensity scale gamma_perp*gamma_par/4 for |alpha|^2.
    double saturation_scale() const { return gamma_perp * gamma_par / 4.0; }

    void validate() const; // throws std::invalid_argument
};

struct ThreeLevelParams {
    double gamma_21 = 0.0;
    double gamma_31 = 0.0;
    double gamma_32 = 0.0;
    double gamma_perp = 1.0;
    double R_pump = 0.0;

    void validate() const;
};

struct FourLevelParams {
    double gamma_10 = 0.0;
    double gamma_20 = 0.0;
    double gamma_21 = 0.0;
    double gamma_30 = 0.0;
    double gamma_31 = 0.0;
    double gamma_32 = 0.0;
    double gamma_perp = 1.0;
    double R_pump = 0.0;

    void validate() const;
};

// The reductions to an effective two-level medium assume that the pumped
// upper level drains much faster than every other rate (and, for four
// levels, that the lower lasing level empties fast as well). These checks
// are advisory: callers emit warnings, never errors.
bool three_level_reduction_valid(const ThreeLevelParams& p, double ratio = 100.0);
bool four_level_gamma32_dominant(const FourLevelParams& p, double ratio = 100.0);
bool four_level_gamma10_dominant(const FourLevelParams& p, double ratio = 100.0);

// Ring cavity geometry. R is the amplitude reflectivity lumped over one
// round trip, so R^2 is the surviving power fraction.
struct CavityParams {
    double R = 0.9;
    double L_m = 1.0; // medium length
    double L_c = 1.0; // cavity length
    double c = 1.0;   // light speed in the chosen units

    double kappa() const;               // cavity damping rate c|ln R^2|/(2 L_c)
    double round_trip_delay() const {   // (L_c - L_m)/c
        return (L_c - L_m) / c;
    }
    double free_spectral_range() const; // 2 pi c / L_c [rad/time]

    void validate() const;
};

// Effective two-level constants equivalent to an incoherently pumped
// three-level scheme: gamma_par = R + gamma_21, d0 = (R - gamma_21)/(R + gamma_21).
// The coupling g and detuning are not determined by the level scheme and
// are supplied by the caller.
MediumParams map_three_level(const ThreeLevelParams& p, double g, double delta);

// Four-level equivalent: gamma_par = gamma_20 + gamma_21 + R,
// d0 = R/(gamma_20 + gamma_21 + R).
MediumParams map_four_level(const FourLevelParams& p, double g, double delta);

struct EffectivePump {
    double r; // pump parameter a L_m / |ln R^2|
    double G; // gain parameter r/d0 (pump-independent part)
    double a; // small-signal gain per unit length
};

// Dimensionless pump r = 2 d0 g L_m / (gamma_perp c |ln R^2|). Requires a
// lossy cavity (R < 1).
EffectivePump effective_pump_r(const MediumParams& m, const CavityParams& cav);

std::string to_string(Provenance p);

} // namespace mbloch
