#include "mbloch/ring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mbloch/csv.hpp"
#include "mbloch/errors.hpp"
#include "mbloch/rootfind.hpp"

namespace mbloch {

std::complex<double> apply_boundary(std::complex<double> alpha_exit,
                                    const CavityParams& cav, double k) {
    cav.validate();
    return cav.R * std::polar(1.0, k * cav.L_c) * alpha_exit;
}

double loss_ratio(double R_squared) {
    double u = 1.0 - R_squared;
    if (u < 1e-8) return 1.0 + 0.5 * u; // removable 0/0 at R = 1
    return -std::log1p(-u) / u;
}

ExitIntensity exit_intensity(double r, double Delta, const MediumParams& m,
                             const CavityParams& cav) {
    m.validate();
    cav.validate();
    if (cav.R >= 1.0)
        throw std::invalid_argument("exit_intensity: requires R < 1");
    double value = m.gamma_par * m.gamma_perp / 4.0 * loss_ratio(cav.R * cav.R) *
                   (r - 1.0 - Delta * Delta);
    if (value < 0.0) return {0.0, true};
    return {value, false};
}

ExitIntensity resonant_exit_intensity(double r, const MediumParams& m,
                                      const CavityParams& cav) {
    return exit_intensity(r, 0.0, m, cav);
}

std::vector<LaserOperatingPoint> mode_family(const MediumParams& m,
                                             const CavityParams& cav,
                                             double omega_c, double omega_21,
                                             int n_min, int n_max) {
    m.validate();
    cav.validate();
    if (n_min > n_max)
        throw std::invalid_argument("mode_family: empty n range");
    double fsr = cav.free_spectral_range();
    if (!(std::abs(omega_c - omega_21) < fsr))
        throw std::invalid_argument(
            "mode_family: |omega_c - omega_21| must be below the free "
            "spectral range; fold omega_c into the neighboring mode first");

    double kappa = cav.kappa();
    double gp = m.gamma_perp;
    double r = effective_pump_r(m, cav).r;

    std::vector<LaserOperatingPoint> family;
    family.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (int n = n_min; n <= n_max; ++n) {
        LaserOperatingPoint pt;
        pt.n = n;
        pt.omega_n = (kappa * omega_21 + gp * omega_c) / (kappa + gp) +
                     n * gp / (kappa + gp) * fsr;
        double off = (omega_c - omega_21 + n * fsr) / (kappa + gp);
        pt.r_on = 1.0 + off * off;
        pt.Delta = (pt.omega_n - omega_21) / gp;
        pt.exit_intensity = exit_intensity(r, pt.Delta, m, cav).value;
        family.push_back(pt);
    }

    std::sort(family.begin(), family.end(),
              [](const LaserOperatingPoint& a, const LaserOperatingPoint& b) {
                  if (a.r_on != b.r_on) return a.r_on < b.r_on;
                  if (std::abs(a.n) != std::abs(b.n))
                      return std::abs(a.n) < std::abs(b.n);
                  return a.n > b.n;
              });
    // Exact threshold ties (anti-resonant omega_c) are kept and flagged.
    for (std::size_t i = 0; i + 1 < family.size(); ++i) {
        if (family[i].r_on == family[i + 1].r_on) {
            family[i].degenerate = true;
            family[i + 1].degenerate = true;
        }
    }
    return family;
}

IntensityProfile intensity_profile(double r, double Delta,
                                   const MediumParams& m,
                                   const CavityParams& cav, int n_points) {
    m.validate();
    cav.validate();
    if (n_points < 2)
        throw std::invalid_argument("intensity_profile: n_points must be >= 2");
    if (!(r > 1.0 + Delta * Delta))
        throw regime_error("intensity_profile: below threshold (r <= 1 + Delta^2)");
    if (cav.R >= 1.0)
        throw std::invalid_argument("intensity_profile: requires R < 1");

    double I_exit = exit_intensity(r, Delta, m, cav).value;
    double R2 = cav.R * cav.R;
    double I_entry = R2 * I_exit;
    double loss = std::abs(std::log(R2));
    double sat4 = 4.0 / (m.gamma_par * m.gamma_perp);
    double dsq = 1.0 + Delta * Delta;

    IntensityProfile prof;
    prof.z.resize(n_points);
    prof.amp2.resize(n_points);

    // March in z reusing the previous root as the next initial guess; the
    // profile is monotone between the two boundary intensities.
    double guess = I_entry;
    for (int i = 0; i < n_points; ++i) {
        double z = cav.L_m * static_cast<double>(i) / (n_points - 1);
        prof.z[i] = z;
        if (i == 0) {
            prof.amp2[i] = I_entry;
            continue;
        }
        if (i == n_points - 1) {
            prof.amp2[i] = I_exit;
            continue;
        }
        double target = r * loss * z / cav.L_m;
        auto f = [&](double I) {
            return dsq * std::log(I / I_entry) + sat4 * (I - I_entry) - target;
        };
        auto df = [&](double I) { return dsq / I + sat4; };
        guess = newton_bisect(f, df, I_entry, I_exit, std::max(guess, I_entry),
                              {1e-13, 200});
        prof.amp2[i] = guess;
    }
    return prof;
}

void write_csv(std::ostream& os, const IntensityProfile& profile,
               const MediumParams& m) {
    std::vector<std::string> names{"z_over_Lm", "amp2", "amp2_over_sat"};
    csv::header(os, names);
    double L = profile.z.empty() ? 1.0 : profile.z.back();
    double sat = m.saturation_scale();
    for (std::size_t i = 0; i < profile.z.size(); ++i) {
        double vals[] = {profile.z[i] / L, profile.amp2[i],
                         profile.amp2[i] / sat};
        csv::row(os, vals);
    }
}

} // namespace mbloch
