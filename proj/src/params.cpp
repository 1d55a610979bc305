#include "mbloch/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mbloch {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

void MediumParams::validate() const {
    require(gamma_perp > 0.0, "MediumParams: gamma_perp must be > 0");
    require(gamma_par > 0.0, "MediumParams: gamma_par must be > 0");
    // The coherence-decay bound applies to the closed symmetric-decay
    // two-level model. The three-/four-level reductions produce a
    // pump-dependent gamma_par (R + gamma_21 etc.) that can exceed it.
    if (provenance == Provenance::native)
        require(gamma_perp >= 0.5 * gamma_par,
                "MediumParams: gamma_perp >= gamma_par/2 required");
    require(std::abs(d0) <= 1.0, "MediumParams: |d0| <= 1 required");
    require(std::isfinite(g) && std::isfinite(delta),
            "MediumParams: g and delta must be finite");
}

void ThreeLevelParams::validate() const {
    require(gamma_21 >= 0.0 && gamma_31 >= 0.0 && gamma_32 >= 0.0 &&
                R_pump >= 0.0,
            "ThreeLevelParams: rates must be >= 0");
    require(gamma_perp > 0.0, "ThreeLevelParams: gamma_perp must be > 0");
}

void FourLevelParams::validate() const {
    require(gamma_10 >= 0.0 && gamma_20 >= 0.0 && gamma_21 >= 0.0 &&
                gamma_30 >= 0.0 && gamma_31 >= 0.0 && gamma_32 >= 0.0 &&
                R_pump >= 0.0,
            "FourLevelParams: rates must be >= 0");
    require(gamma_perp > 0.0, "FourLevelParams: gamma_perp must be > 0");
}

bool three_level_reduction_valid(const ThreeLevelParams& p, double ratio) {
    double others = std::max({p.gamma_21, p.gamma_31, p.gamma_perp, p.R_pump});
    return p.gamma_32 >= ratio * others;
}

bool four_level_gamma32_dominant(const FourLevelParams& p, double ratio) {
    double others = std::max({p.gamma_10, p.gamma_20, p.gamma_21, p.gamma_30,
                              p.gamma_31, p.gamma_perp, p.R_pump});
    return p.gamma_32 >= ratio * others;
}

bool four_level_gamma10_dominant(const FourLevelParams& p, double ratio) {
    double others = std::max({p.gamma_20, p.gamma_21, p.gamma_30, p.gamma_31,
                              p.gamma_perp, p.R_pump});
    return p.gamma_10 >= ratio * others;
}

void CavityParams::validate() const {
    require(R > 0.0 && R <= 1.0, "CavityParams: 0 < R <= 1 required");
    require(L_m > 0.0 && L_m <= L_c, "CavityParams: 0 < L_m <= L_c required");
    require(c > 0.0, "CavityParams: c must be > 0");
}

double CavityParams::kappa() const {
    return c * std::abs(std::log(R * R)) / (2.0 * L_c);
}

double CavityParams::free_spectral_range() const {
    return 2.0 * std::numbers::pi * c / L_c;
}

MediumParams map_three_level(const ThreeLevelParams& p, double g, double delta) {
    p.validate();
    double denom = p.R_pump + p.gamma_21;
    if (denom == 0.0)
        throw std::invalid_argument(
            "map_three_level: R_pump + gamma_21 = 0, d0 undefined");
    MediumParams m;
    m.gamma_perp = p.gamma_perp;
    m.gamma_par = denom;
    m.d0 = (p.R_pump - p.gamma_21) / denom;
    m.g = g;
    m.delta = delta;
    m.provenance = Provenance::three_level;
    return m;
}

MediumParams map_four_level(const FourLevelParams& p, double g, double delta) {
    p.validate();
    double denom = p.gamma_20 + p.gamma_21 + p.R_pump;
    if (denom == 0.0)
        throw std::invalid_argument(
            "map_four_level: gamma_20 + gamma_21 + R_pump = 0, d0 undefined");
    MediumParams m;
    m.gamma_perp = p.gamma_perp;
    m.gamma_par = denom;
    m.d0 = p.R_pump / denom;
    m.g = g;
    m.delta = delta;
    m.provenance = Provenance::four_level;
    return m;
}

EffectivePump effective_pump_r(const MediumParams& m, const CavityParams& cav) {
    m.validate();
    cav.validate();
    if (cav.R >= 1.0)
        throw std::invalid_argument("effective_pump_r: lossless cavity: r undefined");
    double loss = std::abs(std::log(cav.R * cav.R));
    double a = m.small_signal_gain(cav.c);
    double G = 2.0 * m.g * cav.L_m / (m.gamma_perp * cav.c * loss);
    return EffectivePump{G * m.d0, G, a};
}

std::string to_string(Provenance p) {
    switch (p) {
    case Provenance::native: return "native";
    case Provenance::three_level: return "three_level";
    case Provenance::four_level: return "four_level";
    }
    return "unknown";
}

} // namespace mbloch
