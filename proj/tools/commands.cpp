#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "mbloch/amplifier.hpp"
#include "mbloch/bloch.hpp"
#include "mbloch/csv.hpp"
#include "mbloch/errors.hpp"
#include "mbloch/lorenz.hpp"
#include "mbloch/multimode.hpp"
#include "mbloch/params.hpp"
#include "mbloch/ring.hpp"

namespace mbloch::cli {

namespace {

using Complex = std::complex<double>;

constexpr double two_pi = 2.0 * std::numbers::pi;

double lerp_at(const std::vector<double>& ts, const std::vector<double>& vs,
               double t) {
    if (t <= ts.front()) return vs.front();
    if (t >= ts.back()) return vs.back();
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t j = static_cast<std::size_t>(it - ts.begin());
    double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
    return vs[j - 1] + w * (vs[j] - vs[j - 1]);
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return v;
}

AxisSpec axis_or_default(const RunConfig& cfg, const std::string& path,
                         double start, double stop, int n,
                         AxisSpec::Scale scale = AxisSpec::Scale::linear) {
    if (cfg.sweep && cfg.sweep->param_path == path) return *cfg.sweep;
    AxisSpec ax;
    ax.param_path = path;
    ax.start = start;
    ax.stop = stop;
    ax.n = n;
    ax.scale = scale;
    return ax;
}

Complex complex_param(const json& p, const std::string& key, Complex fallback) {
    if (!p.contains(key)) return fallback;
    const json& j = p.at(key);
    if (j.is_number()) return {j.get<double>(), 0.0};
    return {j.value("re", 0.0), j.value("im", 0.0)};
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

ode::Options tolerance_options(const json& p) {
    ode::Options o;
    o.abs_tol = p.value("abs_tol", p.value("tol", 1e-9));
    o.rel_tol = p.value("rel_tol", p.value("tol", 1e-9));
    return o;
}

// ---------------------------------------------------------------------------

Summary cmd_pumpmap(const RunConfig& cfg, std::ostream& out) {
    const json& p = cfg.params;
    std::string task = p.value("task", std::string{"map"});
    double gamma = p.value("gamma", 1.0);
    bool verify = task == "verify";

    AxisSpec ax = axis_or_default(cfg, "R_over_gamma", 0.0, 10.0,
                                  verify ? 13 : 201);
    auto xs = ax.values();

    double dominance = p.value("dominance_ratio", 1e4);
    double gamma31 = p.value("gamma_31_over_gamma", 0.3) * gamma;
    ode::Options opts = tolerance_options(p);

    std::vector<std::string> names{"R_over_gamma", "d0_three_level",
                                   "gamma_par_three_over_gamma",
                                   "d0_four_level",
                                   "gamma_par_four_over_gamma"};
    if (verify) {
        names.push_back("d_three_dynamic");
        names.push_back("d_four_dynamic");
    }
    csv::header(out, names);

    Summary summary;
    for (double x : xs) {
        double R = x * gamma;
        ThreeLevelParams p3;
        p3.gamma_21 = gamma;
        p3.gamma_31 = gamma31;
        p3.gamma_32 = dominance * std::max({gamma, gamma31, R, 1.0});
        p3.gamma_perp = 1.0;
        p3.R_pump = R;

        FourLevelParams p4;
        p4.gamma_20 = gamma / 2.0;
        p4.gamma_21 = gamma / 2.0;
        p4.gamma_10 = dominance * std::max({gamma, R, 1.0});
        p4.gamma_32 = dominance * std::max({gamma, R, 1.0});
        p4.gamma_perp = 1.0;
        p4.R_pump = R;

        std::vector<double> row{x, 0.0, 0.0, 0.0, 0.0};
        if (R + gamma > 0.0) {
            auto m3 = map_three_level(p3, 1.0, 0.0);
            row[1] = m3.d0;
            row[2] = m3.gamma_par / gamma;
        }
        auto m4 = map_four_level(p4, 1.0, 0.0);
        row[3] = m4.d0;
        row[4] = m4.gamma_par / gamma;

        if (verify) {
            // The reduced population decay is R + gamma (three-level) or
            // gamma_20 + gamma_21 + R (four-level), both >= gamma.
            double t_end = 60.0 / gamma;
            auto traj3 = integrate_three_level({1.0, 0.0, 0.0, {0.0, 0.0}},
                                               DriveField::off(), p3, 0.0,
                                               t_end, opts);
            auto traj4 = integrate_four_level(
                {1.0, 0.0, 0.0, 0.0, {0.0, 0.0}}, DriveField::off(), p4, 0.0,
                t_end, opts);
            row.push_back(traj3.back().inversion());
            row.push_back(traj4.back().inversion());
        }
        csv::row(out, row);
        summary = {{"d0_three", row[1]},
                   {"gamma_par_three", row[2] * gamma},
                   {"d0_four", row[3]},
                   {"gamma_par_four", row[4] * gamma}};
    }
    return summary;
}

// ---------------------------------------------------------------------------

Summary cmd_amplify_curve(const RunConfig& cfg, std::ostream& out) {
    const json& p = cfg.params;
    ParsedMedium pm = parse_medium(p.value("medium", json::object()), cfg.units);
    const MediumParams& m = pm.medium;
    double c = p.value("c", 1.0) / pm.scale;

    Complex alpha0 = complex_param(p, "alpha0", {0.0, 0.0});
    if (p.contains("alpha0_mag2"))
        alpha0 = {std::sqrt(p.at("alpha0_mag2").get<double>()), 0.0};
    alpha0 /= pm.scale;

    double z_end = p.value("z_end", 10.0);
    int n_points = p.value("n_points", 201);

    auto res = propagate_exact(alpha0, m, c, z_end, n_points);
    if (res.trivial_zero_field)
        std::cerr << "warning: alpha(0) = 0 in an inverted medium; staying on "
                     "the unstable trivial solution\n";

    double a = m.small_signal_gain(c);
    double zpd = (a != 0.0) ? 1.0 / std::abs(a) : 1.0;
    double sat = m.saturation_scale();
    double A0 = std::abs(alpha0);

    std::vector<std::string> names{
        "z",      "z_over_zpd", "amp2",          "amp2_over_sat",
        "phase",  "weak_amp2",  "strong_amp2",   "implicit_amp2",
        "d_s",    "re_sigma21_s", "im_sigma21_s", "regime"};
    csv::header(out, names);
    for (std::size_t i = 0; i < res.z.size(); ++i) {
        double z = res.z[i];
        double weak = std::norm(weak_field(alpha0, m, c, z));
        double strong = strong_field(A0 * A0, m, c, z);
        double implicit_a =
            (A0 > 0.0) ? solve_implicit(A0, m, c, z) : 0.0;
        Complex alpha_z = std::polar(std::sqrt(res.amp2[i]), res.phase[i]);
        auto ss = steady_state_two_level(alpha_z, m);
        double vals[] = {z,
                         z / zpd,
                         res.amp2[i],
                         res.amp2[i] / sat,
                         res.phase[i],
                         weak,
                         strong,
                         implicit_a * implicit_a,
                         ss.d_s,
                         ss.sigma21_s.real(),
                         ss.sigma21_s.imag()};
        csv::row(out, vals, to_string(res.regime[i]));
    }
    return {{"exit_amp2", res.amp2.back()},
            {"exit_amp2_over_sat", res.amp2.back() / sat},
            {"exit_phase", res.phase.back()},
            {"gain_per_length", a}};
}

Summary cmd_amplify_index(const RunConfig& cfg, std::ostream& out) {
    const json& p = cfg.params;
    ParsedMedium pm = parse_medium(p.value("medium", json::object()), cfg.units);
    double omega = p.value("omega", 1e3) / pm.scale;

    AxisSpec ax = axis_or_default(cfg, "Delta", -5.0, 5.0, 201);
    csv::header(out, std::vector<std::string>{"Delta", "n_index"});
    double peak = 0.0;
    double n_last = 1.0;
    for (double Delta : ax.values()) {
        MediumParams m = pm.medium;
        m.delta = Delta * m.gamma_perp;
        n_last = refractive_index(m, omega);
        peak = std::max(peak, std::abs(n_last - 1.0));
        double vals[] = {Delta, n_last};
        csv::row(out, vals);
    }
    return {{"peak_n_minus_1", peak}, {"n_index", n_last}};
}

Summary cmd_amplify_transient(const RunConfig& cfg, std::ostream& out) {
    const json& p = cfg.params;
    ParsedMedium pm = parse_medium(p.value("medium", json::object()), cfg.units);
    const MediumParams& m = pm.medium;

    Complex alpha = complex_param(p, "alpha", {0.5, 0.0}) / pm.scale;
    TwoLevelState s0;
    s0.d = p.value("d_init", m.d0);
    s0.sigma12 = complex_param(p, "sigma12_init", {0.0, 0.0});
    double t_end = p.value("t_end", 20.0) / m.gamma_perp;

    auto traj = integrate_two_level(s0, DriveField::constant(alpha), m, t_end,
                                    tolerance_options(p));
    auto ss = steady_state_two_level(alpha, m);
    Complex sigma12_s = std::conj(ss.sigma21_s);

    csv::header(out, std::vector<std::string>{"t", "d", "re_sigma12",
                                              "im_sigma12", "d_steady",
                                              "re_sigma12_steady",
                                              "im_sigma12_steady"});
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& s = traj.states[i];
        double vals[] = {traj.times[i],       s.d,
                         s.sigma12.real(),    s.sigma12.imag(),
                         ss.d_s,              sigma12_s.real(),
                         sigma12_s.imag()};
        csv::row(out, vals);
    }
    const auto& fin = traj.back();
    return {{"d_final", fin.d},
            {"d_steady", ss.d_s},
            {"settling_error", std::abs(fin.d - ss.d_s) +
                                   std::abs(fin.sigma12 - sigma12_s)}};
}

Summary cmd_amplify_rate(const RunConfig& cfg, std::ostream& out) {
    const json& p = cfg.params;
    const json rb = p.value("rates", json::object());
    OpenTwoLevelRates rates;
    rates.lambda1 = rb.value("lambda1", 0.0);
    rates.lambda2 = rb.value("lambda2", 0.0);
    rates.gamma1 = rb.value("gamma1", 1e-3);
    rates.gamma2 = rb.value("gamma2", 1e-3);
    rates.gamma12 = rb.value("gamma12", 0.0);
    rates.gamma21 = rb.value("gamma21", 0.0);
    rates.gamma_perp = rb.value("gamma_perp", 1.0);
    rates.delta = rb.value("delta", 0.0);

    Complex alpha = complex_param(p, "alpha", {0.02, 0.0});
    OpenTwoLevelState b0;
    b0.rho11 = p.value("rho11_init", 1.0);
    b0.rho22 = p.value("rho22_init", 0.0);
    RatePopulations r0{b0.rho11, b0.rho22};
    double t_end = p.value("t_end", 2e3);
    int n_samples = p.value("n_samples", 201);
    ode::Options opts = tolerance_options(p);

    auto drive = DriveField::constant(alpha);
    auto bloch = integrate_open_two_level(b0, drive, rates, t_end, opts);
    auto rate = integrate_rate_equations(r0, drive, rates, t_end, opts);

    std::vector<double> bt = bloch.times, b11, b22, rt = rate.times, r11, r22;
    for (const auto& s : bloch.states) {
        b11.push_back(s.rho11);
        b22.push_back(s.rho22);
    }
    for (const auto& s : rate.states) {
        r11.push_back(s.rho11);
        r22.push_back(s.rho22);
    }

    csv::header(out, std::vector<std::string>{"t", "rho11_bloch", "rho22_bloch",
                                              "rho11_rate", "rho22_rate"});
    double diff_final = 0.0;
    for (double t : linspace(0.0, t_end, n_samples)) {
        double vals[] = {t, lerp_at(bt, b11, t), lerp_at(bt, b22, t),
                         lerp_at(rt, r11, t), lerp_at(rt, r22, t)};
        diff_final = std::abs(vals[2] - vals[4]) + std::abs(vals[1] - vals[3]);
        csv::row(out, vals);
    }
    return {{"final_population_gap", diff_final}};
}

Summary cmd_amplify_adiabatic(const RunConfig& cfg, std::ostream& out) {
    const json& p = cfg.params;
    double gamma = p.value("gamma", 100.0);
    double omega = p.value("omega", 1.0);
    double t_end = p.value("t_end", 20.0 / gamma + 2.0 * two_pi / omega);
    int n_samples = p.value("n_samples", 401);

    SmoothSignal g{[omega](double t) { return std::cos(omega * t); },
                   [omega](double t) { return -omega * std::sin(omega * t); },
                   [omega](double t) {
                       return -omega * omega * std::cos(omega * t);
                   }};
    auto f0 = adiabatic_expansion(g, gamma, 0);
    auto f1 = adiabatic_expansion(g, gamma, 1);
    auto f2 = adiabatic_expansion(g, gamma, 2);

    ode::Options opts;
    opts.abs_tol = opts.rel_tol = 1e-12;
    auto rhs = [&](double t, const std::vector<double>& y,
                   std::vector<double>& dy) {
        dy[0] = -gamma * y[0] + g.value(t);
    };

    csv::header(out, std::vector<std::string>{"t", "g", "f_exact", "f_order0",
                                              "f_order1", "f_order2"});
    std::vector<double> y{0.0};
    double t = 0.0;
    double err0 = 0.0, err1 = 0.0;
    for (double tq : linspace(0.0, t_end, n_samples)) {
        if (tq > t) {
            auto res = ode::advance(rhs, y, t, tq, opts);
            y = std::move(res.y);
            t = tq;
        }
        double vals[] = {t, g.value(t), y[0], f0(t), f1(t), f2(t)};
        csv::row(out, vals);
        if (t > 20.0 / gamma) {
            err0 = std::max(err0, std::abs(y[0] - f0(t)));
            err1 = std::max(err1, std::abs(y[0] - f1(t)));
        }
    }
    double amp = 1.0 / std::sqrt(gamma * gamma + omega * omega);
    return {{"rel_err_order0", err0 / amp}, {"rel_err_order1", err1 / amp}};
}

Summary cmd_amplify(const RunConfig& cfg, std::ostream& out) {
    std::string task = cfg.params.value("task", std::string{"curve"});
    if (task == "curve") return cmd_amplify_curve(cfg, out);
    if (task == "index") return cmd_amplify_index(cfg, out);
    if (task == "transient") return cmd_amplify_transient(cfg, out);
    if (task == "rate") return cmd_amplify_rate(cfg, out);
    if (task == "adiabatic") return cmd_amplify_adiabatic(cfg, out);
    throw ConfigError("amplify: unknown task '" + task + "'");
}

// ---------------------------------------------------------------------------

Summary cmd_profile(const RunConfig& cfg, std::ostream& out) {
    const json& p = cfg.params;
    ParsedMedium pm = parse_medium(p.value("medium", json::object()), cfg.units);
    const MediumParams& m = pm.medium;
    double r = p.value("r", 1.5);
    double Delta = p.value("Delta", 0.0);
    int n_points = p.value("n_points", 201);

    json cav_block = p.value("cavity", json::object());
    std::vector<double> r2s;
    if (cav_block.contains("R_squared") && cav_block.at("R_squared").is_array())
        r2s = cav_block.at("R_squared").get<std::vector<double>>();
    else
        r2s.push_back(cav_block.value("R_squared",
                                      std::pow(cav_block.value("R", 0.9), 2)));

    std::vector<IntensityProfile> profiles;
    std::vector<ExitIntensity> exits;
    for (double r2 : r2s) {
        json blk = cav_block;
        blk["R_squared"] = r2;
        CavityParams cav = parse_cavity(blk, pm.scale);
        profiles.push_back(intensity_profile(r, Delta, m, cav, n_points));
        exits.push_back(Delta == 0.0 ? resonant_exit_intensity(r, m, cav)
                                     : exit_intensity(r, Delta, m, cav));
    }

    double sat = m.saturation_scale();
    if (cfg.output.format == OutputSpec::Format::json) {
        json j;
        j["r"] = r;
        j["Delta"] = Delta;
        j["profiles"] = json::array();
        for (std::size_t k = 0; k < r2s.size(); ++k) {
            json pj;
            pj["R_squared"] = r2s[k];
            pj["exit_intensity"] = exits[k].value;
            pj["entry_intensity"] = profiles[k].amp2.front();
            pj["z_over_Lm"] = json::array();
            pj["amp2_over_sat"] = json::array();
            double L = profiles[k].z.back();
            for (std::size_t i = 0; i < profiles[k].z.size(); ++i) {
                pj["z_over_Lm"].push_back(profiles[k].z[i] / L);
                pj["amp2_over_sat"].push_back(profiles[k].amp2[i] / sat);
            }
            j["profiles"].push_back(std::move(pj));
        }
        emit_json(out, j);
    } else {
        std::vector<std::string> names{"z_over_Lm"};
        for (double r2 : r2s)
            names.push_back("amp2_over_sat_R2_" + csv::format(r2));
        csv::header(out, names);
        double L = profiles.front().z.back();
        std::vector<double> row(names.size());
        for (int i = 0; i < n_points; ++i) {
            row[0] = profiles.front().z[static_cast<std::size_t>(i)] / L;
            for (std::size_t k = 0; k < r2s.size(); ++k)
                row[k + 1] = profiles[k].amp2[static_cast<std::size_t>(i)] / sat;
            csv::row(out, row);
        }
    }

    return {{"exit_intensity", exits.front().value},
            {"entry_intensity", profiles.front().amp2.front()},
            {"boundary_ratio",
             profiles.front().amp2.front() / profiles.front().amp2.back()}};
}

// ---------------------------------------------------------------------------

Summary cmd_modes(const RunConfig& cfg, std::ostream& out) {
    const json& p = cfg.params;
    ParsedMedium pm = parse_medium(p.value("medium", json::object()), cfg.units);
    const MediumParams& m = pm.medium;
    CavityParams cav = parse_cavity(p.value("cavity", json::object()), pm.scale);
    double gap = p.value("omega_c_minus_omega21", 0.0) / pm.scale;
    int n_min = p.value("n_min", -3);
    int n_max = p.value("n_max", 3);

    // Frequencies are reported relative to the atomic line (omega_21 = 0).
    auto family = mode_family(m, cav, gap, 0.0, n_min, n_max);
    auto pump = effective_pump_r(m, cav);
    auto empty = empty_cavity_frequencies(cav, n_min, n_max);

    if (cfg.output.format == OutputSpec::Format::json) {
        json j;
        j["kappa"] = cav.kappa();
        j["round_trip_delay"] = cav.round_trip_delay();
        j["free_spectral_range"] = cav.free_spectral_range();
        j["r"] = pump.r;
        j["G"] = pump.G;
        j["small_signal_gain"] = pump.a;
        j["empty_cavity_omega"] = empty;
        j["modes"] = json::array();
        for (const auto& pt : family) {
            json mj;
            mj["n"] = pt.n;
            mj["omega_minus_omega21"] = pt.omega_n;
            mj["r_on"] = pt.r_on;
            mj["Delta"] = pt.Delta;
            mj["exit_intensity"] = pt.exit_intensity;
            mj["degenerate"] = pt.degenerate;
            j["modes"].push_back(std::move(mj));
        }
        emit_json(out, j);
    } else {
        csv::header(out, std::vector<std::string>{
                             "n", "omega_minus_omega21", "r_on", "Delta",
                             "exit_intensity", "degenerate"});
        for (const auto& pt : family) {
            double vals[] = {static_cast<double>(pt.n), pt.omega_n, pt.r_on,
                             pt.Delta, pt.exit_intensity,
                             pt.degenerate ? 1.0 : 0.0};
            csv::row(out, vals);
        }
    }
    const auto& first = family.front();
    return {{"omega_0", first.omega_n}, {"r_on_0", first.r_on},
            {"kappa", cav.kappa()},     {"fsr", cav.free_spectral_range()},
            {"r", pump.r},              {"G", pump.G}};
}

// ---------------------------------------------------------------------------

Summary cmd_lase(const RunConfig& cfg, std::ostream& out) {
    const json& p = cfg.params;
    ParsedMedium pm = parse_medium(p.value("medium", json::object()), cfg.units);
    const MediumParams& m = pm.medium;
    CavityParams cav = parse_cavity(p.value("cavity", json::object()), pm.scale);
    double gap = p.value("omega_c_minus_omega21", 0.0) / pm.scale;

    auto pump = effective_pump_r(m, cav);
    auto family = mode_family(m, cav, gap, 0.0, -2, 2);
    const auto& mode = family.front();
    auto exit_i = exit_intensity(pump.r, mode.Delta, m, cav);

    // Boundary hop back to the entrance face at the lasing wavenumber.
    double k = (p.value("omega_carrier", 0.0) + mode.omega_n) / cav.c;
    Complex alpha_exit{std::sqrt(exit_i.value), 0.0};
    Complex alpha_entry = apply_boundary(alpha_exit, cav, k);

    json j;
    j["kappa"] = cav.kappa();
    j["round_trip_delay"] = cav.round_trip_delay();
    j["free_spectral_range"] = cav.free_spectral_range();
    j["r"] = pump.r;
    j["G"] = pump.G;
    j["mode_n"] = mode.n;
    j["omega_minus_omega21"] = mode.omega_n;
    j["r_on"] = mode.r_on;
    j["Delta"] = mode.Delta;
    j["above_threshold"] = !exit_i.below_threshold;
    j["exit_intensity"] = exit_i.value;
    j["entry_intensity"] = std::norm(alpha_entry);
    j["uniform_field_intensity"] =
        m.gamma_par * m.gamma_perp / 4.0 * (pump.r - 1.0);

    Summary summary{{"r", pump.r},
                    {"r_on", mode.r_on},
                    {"omega_0", mode.omega_n},
                    {"exit_intensity", exit_i.value},
                    {"entry_intensity", std::norm(alpha_entry)},
                    {"kappa", cav.kappa()}};

    if (!p.contains("dynamics")) {
        emit_json(out, j);
        return summary;
    }

    // Time-domain run of the uniform-field traveling-wave model around the
    // monochromatic operating point.
    const json& dyn = p.at("dynamics");
    std::size_t n_z = dyn.value("n_z", std::size_t{64});
    double t_end = dyn.value("t_end_tau", 50.0) / m.gamma_perp;
    double pert = dyn.value("perturbation", 1e-3);
    double spatial = dyn.value("spatial_perturbation", 0.0);

    SingleModeParams sp;
    sp.kappa = cav.kappa();
    sp.gamma_perp = m.gamma_perp;
    sp.gamma_par = m.gamma_par;
    sp.r = pump.r;
    sp.Delta_c = gap / m.gamma_perp;

    double base = std::sqrt(std::max(pump.r - 1.0, 1e-6));
    auto F0 = FieldOnRing::uniform(base * (1.0 + pert), n_z, cav.L_m, cav.L_c,
                                   cav.c);
    if (spatial != 0.0) {
        for (std::size_t i = 0; i < n_z; ++i) {
            double z = static_cast<double>(i) / static_cast<double>(n_z);
            F0.samples[i] += spatial * std::polar(1.0, two_pi * z);
        }
    }
    std::vector<Complex> P0(n_z, base);
    std::vector<double> D0(n_z, 1.0);

    auto traj = integrate_traveling_wave(F0, P0, D0, sp, t_end,
                                         tolerance_options(dyn));
    write_csv(out, traj);

    if (dyn.value("output_spectrum", false) && !cfg.output.path.empty()) {
        FieldOnRing final_field;
        final_field.samples = traj.F.back();
        final_field.L_m = cav.L_m;
        final_field.L_c = cav.L_c;
        final_field.c = cav.c;
        std::ofstream sp_out(cfg.output.path + ".spectrum.csv");
        write_csv(sp_out, mode_decompose(final_field));
    }

    double peak = 0.0;
    for (const auto& v : traj.F.back()) peak = std::max(peak, std::abs(v));
    summary["final_peak_F"] = peak;
    return summary;
}

// ---------------------------------------------------------------------------

SingleModeParams lorenz_params(const json& p) {
    SingleModeParams sp;
    sp.kappa = p.value("kappa", 3.0);
    sp.gamma_perp = p.value("gamma_perp", 1.0);
    sp.gamma_par = p.value("gamma_par", 1.0);
    sp.r = p.value("r", 2.0);
    sp.Delta_c = p.value("Delta_c", 0.0);
    return sp;
}

Summary cmd_lorenz(const RunConfig& cfg, std::ostream& out) {
    const json& p = cfg.params;
    std::string task = p.value("task", std::string{"integrate"});
    SingleModeParams sp = lorenz_params(p);
    ode::Options opts = tolerance_options(p);

    if (task == "integrate") {
        LorenzState s0{p.value("E0", 1e-3), p.value("P0", 0.0),
                       p.value("D0", sp.r)};
        double t_end = p.value("t_end_tau", 50.0) / sp.gamma_perp;
        auto traj = integrate_real(s0, sp, t_end, opts);
        if (p.value("coords", std::string{"laser"}) == "lorenz") {
            auto lc = to_lorenz_coordinates(sp);
            csv::header(out, std::vector<std::string>{"tau", "X", "Y", "Z"});
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                auto xyz = to_xyz(traj.states[i], lc.r);
                double vals[] = {traj.times[i] * sp.gamma_perp, xyz.x, xyz.y,
                                 xyz.z};
                csv::row(out, vals);
            }
        } else {
            write_csv(out, traj, sp.gamma_perp);
        }
        const auto& fin = traj.back();
        return {{"E_final", fin.E}, {"P_final", fin.P}, {"D_final", fin.D}};
    }

    if (task == "complex") {
        ComplexModeState s0;
        s0.F = complex_param(p, "F0", {1e-3, 0.0});
        s0.P = complex_param(p, "P0", {0.0, 0.0});
        s0.D = p.value("D0", sp.r);
        double t_end = p.value("t_end_tau", 50.0) / sp.gamma_perp;
        auto traj = integrate_complex(s0, sp, t_end, opts);
        write_csv(out, traj, sp.gamma_perp);
        const auto& fin = traj.back();
        return {{"abs_F_final", std::abs(fin.F)}, {"D_final", fin.D}};
    }

    if (task == "stability") {
        auto hopf = hopf_threshold(sp);
        json j;
        j["bad_cavity"] = sp.kappa > sp.gamma_perp + sp.gamma_par;
        if (hopf.kind == HopfThreshold::Kind::threshold)
            j["r_hb"] = hopf.r_hb;
        else if (hopf.kind == HopfThreshold::Kind::divergent)
            j["r_hb"] = "divergent";
        else
            j["r_hb"] = "stable for all r";
        j["fixed_points"] = json::array();
        double max_real_lasing = 0.0;
        for (const auto& fp : fixed_points(sp)) {
            auto rep = jacobian_stability(sp, fp);
            json fj;
            fj["fixed_point"] = {{"E", fp.E}, {"P", fp.P}, {"D", fp.D}};
            fj["eigenvalues"] = json::array();
            for (const auto& ev : rep.eigenvalues)
                fj["eigenvalues"].push_back({{"re", ev.real()},
                                             {"im", ev.imag()}});
            fj["verdict"] = to_string(rep.verdict);
            fj["max_real"] = rep.max_real;
            j["fixed_points"].push_back(std::move(fj));
            if (fp.E != 0.0) max_real_lasing = rep.max_real;
        }
        emit_json(out, j);
        return {{"r_hb", hopf.kind == HopfThreshold::Kind::threshold
                             ? hopf.r_hb
                             : std::numeric_limits<double>::quiet_NaN()},
                {"max_real_lasing", max_real_lasing}};
    }

    if (task == "lyapunov") {
        LorenzState s0{p.value("E0", 1.0), p.value("P0", 1.0),
                       p.value("D0", sp.r)};
        LyapunovOptions lopts;
        lopts.renorm_interval_tau = p.value("renorm_interval_tau", 1.0);
        lopts.seed = cfg.seed;
        lopts.abs_tol = opts.abs_tol;
        lopts.rel_tol = opts.rel_tol;
        double t_total = p.value("t_total_tau", 2000.0);
        double t_transient = p.value("t_transient_tau", 1000.0);
        double lam = lyapunov_max(sp, s0, t_total, t_transient, lopts);
        auto lc = to_lorenz_coordinates(sp);
        json j{{"lambda_max_per_tau", lam},
               {"sigma", lc.sigma},
               {"b", lc.b},
               {"r", lc.r},
               {"t_total_tau", t_total},
               {"t_transient_tau", t_transient},
               {"seed", cfg.seed}};
        emit_json(out, j);
        return {{"lambda_max", lam}};
    }

    if (task == "map") {
        auto lc = to_lorenz_coordinates(sp);
        LorenzState s0{p.value("E0", 0.0), p.value("P0", 0.0),
                       p.value("D0", sp.r)};
        auto xyz = to_xyz(s0, lc.r);
        json j{{"sigma", lc.sigma}, {"b", lc.b},   {"r", lc.r},
               {"X", xyz.x},        {"Y", xyz.y},  {"Z", xyz.z},
               {"tau_per_t", sp.gamma_perp}};
        emit_json(out, j);
        return {{"sigma", lc.sigma}, {"b", lc.b}, {"r", lc.r}};
    }

    if (task == "ratio") {
        double G = p.value("G", 100.0);
        double ratio = three_level_instability_ratio(G);
        json j{{"G", G},
               {"ratio", ratio},
               {"large_G_estimate", 1.0 + 16.0 / G}};
        emit_json(out, j);
        return {{"ratio", ratio}};
    }

    throw ConfigError("lorenz: unknown task '" + task + "'");
}

// ---------------------------------------------------------------------------

Summary cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.sweep) throw ConfigError("sweep: missing sweep axis");
    const AxisSpec& ax = *cfg.sweep;

    RunConfig inner;
    inner.command = cfg.params.value("command", std::string{});
    inner.params = cfg.params.value("params", json::object());
    inner.units = cfg.units;
    inner.seed = cfg.seed;
    inner.output.format = OutputSpec::Format::csv;

    auto values = ax.values();
    std::vector<Summary> results(values.size());
    std::vector<std::string> errors(values.size());

    auto worker = [&](std::size_t begin, std::size_t step) {
        for (std::size_t i = begin; i < values.size(); i += step) {
            RunConfig point = inner;
            json* slot = find_path(point.params, ax.param_path);
            if (!slot) {
                errors[i] = "sweep: param_path '" + ax.param_path +
                            "' not found in inner params";
                continue;
            }
            *slot = values[i];
            try {
                std::ostringstream sink;
                results[i] = run_command(point, sink);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    int n_threads = std::max(1, cfg.threads);
    if (n_threads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < n_threads; ++k)
            pool.emplace_back(worker, static_cast<std::size_t>(k),
                              static_cast<std::size_t>(n_threads));
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < values.size(); ++i)
        if (!errors[i].empty())
            throw std::runtime_error("sweep point " + std::to_string(i) +
                                     " (" + ax.param_path + " = " +
                                     csv::format(values[i]) +
                                     "): " + errors[i]);

    // Union of summary keys, ordered, fixed across rows.
    std::vector<std::string> keys;
    for (const auto& s : results)
        for (const auto& [k, v] : s)
            if (std::find(keys.begin(), keys.end(), k) == keys.end())
                keys.push_back(k);
    std::sort(keys.begin(), keys.end());

    std::vector<std::string> names{"index", ax.param_path};
    names.insert(names.end(), keys.begin(), keys.end());
    csv::header(out, names);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::vector<double> row{static_cast<double>(i), values[i]};
        for (const auto& k : keys) {
            auto it = results[i].find(k);
            row.push_back(it == results[i].end()
                              ? std::numeric_limits<double>::quiet_NaN()
                              : it->second);
        }
        csv::row(out, row);
    }
    return {{"points", static_cast<double>(values.size())}};
}

} // namespace

Summary run_command(const RunConfig& cfg, std::ostream& out) {
    if (cfg.command == "pumpmap") return cmd_pumpmap(cfg, out);
    if (cfg.command == "amplify") return cmd_amplify(cfg, out);
    if (cfg.command == "profile") return cmd_profile(cfg, out);
    if (cfg.command == "modes") return cmd_modes(cfg, out);
    if (cfg.command == "lase") return cmd_lase(cfg, out);
    if (cfg.command == "lorenz") return cmd_lorenz(cfg, out);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out);
    throw ConfigError("unknown command '" + cfg.command + "'");
}

int run(const RunConfig& cfg, bool validate_only) {
    auto diags = validate(cfg);
    bool fatal = false;
    for (const auto& d : diags) {
        bool is_err = d.severity == Diagnostic::Severity::error;
        fatal = fatal || is_err;
        std::cerr << (is_err ? "error: " : "warning: ") << d.path << ": "
                  << d.message << '\n';
    }
    if (fatal) return 2;
    if (validate_only) return 0;

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!cfg.output.path.empty()) {
        file.open(cfg.output.path);
        if (!file) {
            std::cerr << "error: cannot open output file " << cfg.output.path
                      << '\n';
            return 2;
        }
        out = &file;
    }

    try {
        run_command(cfg, *out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const regime_error& e) {
        std::cerr << "regime error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

} // namespace mbloch::cli
