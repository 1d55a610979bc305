#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mbloch/lorenz.hpp"

namespace mbloch::cli {

namespace {

const std::set<std::string> known_commands{
    "pumpmap", "amplify", "profile", "modes", "lase", "lorenz", "sweep"};

// Byte offset -> "line L, column C" for parse errors.
std::string locate(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double number_at(const json& j, const char* key, double fallback) {
    if (auto it = j.find(key); it != j.end()) return it->get<double>();
    return fallback;
}

} // namespace

std::vector<double> AxisSpec::values() const {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (scale == Scale::log) {
        double la = std::log(start), lb = std::log(stop);
        for (int i = 0; i < n; ++i)
            v[static_cast<std::size_t>(i)] =
                std::exp(la + (lb - la) * i / (n - 1));
    } else {
        for (int i = 0; i < n; ++i)
            v[static_cast<std::size_t>(i)] = start + (stop - start) * i / (n - 1);
    }
    return v;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + " (" + locate(text, e.byte) +
                          "): " + e.what());
    }
    return config_from_json(j, path);
}

RunConfig config_from_json(const json& j, const std::string& origin) {
    if (!j.is_object())
        throw ConfigError(origin + ": top level must be a JSON object");
    RunConfig cfg;
    cfg.command = j.value("command", std::string{});
    if (j.contains("params")) cfg.params = j.at("params");
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.units = j.value("units", std::string{"normalized"});
    if (j.contains("output")) {
        const auto& o = j.at("output");
        cfg.output.path = o.value("path", std::string{});
        std::string f = o.value("format", std::string{"csv"});
        cfg.output.format =
            (f == "json") ? OutputSpec::Format::json : OutputSpec::Format::csv;
    }
    if (j.contains("sweep") && !j.at("sweep").is_null()) {
        const auto& s = j.at("sweep");
        AxisSpec ax;
        ax.param_path = s.value("param_path", std::string{});
        ax.start = s.value("start", 0.0);
        ax.stop = s.value("stop", 1.0);
        ax.n = s.value("n", 2);
        ax.scale = (s.value("scale", std::string{"linear"}) == "log")
                       ? AxisSpec::Scale::log
                       : AxisSpec::Scale::linear;
        cfg.sweep = ax;
    }
    return cfg;
}

const json* find_path(const json& root, const std::string& dotted) {
    const json* cur = &root;
    std::size_t pos = 0;
    while (pos <= dotted.size()) {
        std::size_t dot = dotted.find('.', pos);
        std::string key =
            (dot == std::string::npos) ? dotted.substr(pos)
                                       : dotted.substr(pos, dot - pos);
        if (!cur->is_object() || !cur->contains(key)) return nullptr;
        cur = &cur->at(key);
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    return cur;
}

json* find_path(json& root, const std::string& dotted) {
    return const_cast<json*>(find_path(static_cast<const json&>(root), dotted));
}

ParsedMedium parse_medium(const json& block, const std::string& units) {
    if (!block.is_object())
        throw ConfigError("medium: expected an object");
    ParsedMedium out;
    MediumParams m;
    if (block.contains("three_level")) {
        const auto& t = block.at("three_level");
        ThreeLevelParams p;
        p.gamma_21 = number_at(t, "gamma_21", 0.0);
        p.gamma_31 = number_at(t, "gamma_31", 0.0);
        p.gamma_32 = number_at(t, "gamma_32", 0.0);
        p.gamma_perp = number_at(t, "gamma_perp", 1.0);
        p.R_pump = number_at(t, "R_pump", 0.0);
        m = map_three_level(p, number_at(block, "g", 1.0),
                            number_at(block, "delta", 0.0));
        if (!three_level_reduction_valid(p))
            out.warnings.push_back(
                "medium.three_level: gamma_32 is not dominant; the two-level "
                "reduction may be inaccurate");
    } else if (block.contains("four_level")) {
        const auto& t = block.at("four_level");
        FourLevelParams p;
        p.gamma_10 = number_at(t, "gamma_10", 0.0);
        p.gamma_20 = number_at(t, "gamma_20", 0.0);
        p.gamma_21 = number_at(t, "gamma_21", 0.0);
        p.gamma_30 = number_at(t, "gamma_30", 0.0);
        p.gamma_31 = number_at(t, "gamma_31", 0.0);
        p.gamma_32 = number_at(t, "gamma_32", 0.0);
        p.gamma_perp = number_at(t, "gamma_perp", 1.0);
        p.R_pump = number_at(t, "R_pump", 0.0);
        m = map_four_level(p, number_at(block, "g", 1.0),
                           number_at(block, "delta", 0.0));
        if (!four_level_gamma32_dominant(p))
            out.warnings.push_back(
                "medium.four_level: gamma_32 is not dominant; the two-level "
                "reduction may be inaccurate");
        if (!four_level_gamma10_dominant(p))
            out.warnings.push_back(
                "medium.four_level: gamma_10 is not dominant; the lower "
                "lasing level does not drain fast");
    } else {
        m.gamma_perp = number_at(block, "gamma_perp", 1.0);
        m.gamma_par = number_at(block, "gamma_par", 1.0);
        m.g = number_at(block, "g", 1.0);
        m.d0 = number_at(block, "d0", 0.0);
        m.delta = number_at(block, "delta", 0.0);
    }

    if (units == "absolute") {
        out.scale = m.gamma_perp;
        m.gamma_par /= out.scale;
        m.delta /= out.scale;
        m.g /= out.scale * out.scale;
        m.gamma_perp = 1.0;
    }
    m.validate();
    out.medium = m;
    return out;
}

CavityParams parse_cavity(const json& block, double scale) {
    if (!block.is_object())
        throw ConfigError("cavity: expected an object");
    CavityParams cav;
    if (block.contains("R_squared")) {
        double r2 = block.at("R_squared").get<double>();
        if (!(r2 > 0.0))
            throw ConfigError("cavity.R_squared: must be > 0");
        cav.R = std::sqrt(r2);
    } else {
        cav.R = number_at(block, "R", 0.9);
    }
    cav.L_m = number_at(block, "L_m", 1.0);
    cav.L_c = number_at(block, "L_c", cav.L_m);
    cav.c = number_at(block, "c", 1.0) / scale; // keep lengths, rescale time
    cav.validate();
    return cav;
}

std::vector<Diagnostic> validate(const RunConfig& cfg) {
    std::vector<Diagnostic> diags;
    auto error = [&](const std::string& path, const std::string& msg) {
        diags.push_back({Diagnostic::Severity::error, path, msg});
    };
    auto warning = [&](const std::string& path, const std::string& msg) {
        diags.push_back({Diagnostic::Severity::warning, path, msg});
    };

    if (cfg.command.empty()) {
        error("command", "missing command (one of pumpmap, amplify, profile, "
                         "modes, lase, lorenz, sweep)");
        return diags;
    }
    if (!known_commands.count(cfg.command)) {
        error("command", "unknown command '" + cfg.command + "'");
        return diags;
    }
    if (cfg.units != "normalized" && cfg.units != "absolute")
        error("units", "units must be 'normalized' or 'absolute'");

    if (cfg.sweep) {
        const auto& ax = *cfg.sweep;
        if (ax.param_path.empty())
            error("sweep.param_path", "missing parameter path");
        if (ax.n < 2) error("sweep.n", "sweep needs n >= 2 points");
        if (ax.scale == AxisSpec::Scale::log && !(ax.start > 0.0 && ax.stop > 0.0))
            error("sweep", "log scale requires positive start/stop");
        if (!ax.param_path.empty() && cfg.command != "pumpmap") {
            const json& root = (cfg.command == "sweep" && cfg.params.contains("params"))
                                   ? cfg.params.at("params")
                                   : cfg.params;
            if (!find_path(root, ax.param_path))
                error("sweep.param_path",
                      "path '" + ax.param_path + "' not found in params");
        }
    }

    // Range checks on the common blocks.
    if (const json* r2 = find_path(cfg.params, "cavity.R_squared")) {
        if (r2->is_number()) {
            double v = r2->get<double>();
            if (!(v > 0.0 && v <= 1.0))
                error("params.cavity.R_squared",
                      "must lie in (0, 1] (power reflectivity; CavityParams "
                      "invariant 0 < R <= 1)");
        }
    }
    if (const json* r = find_path(cfg.params, "cavity.R")) {
        if (r->is_number()) {
            double v = r->get<double>();
            if (!(v > 0.0 && v <= 1.0))
                error("params.cavity.R", "must lie in (0, 1]");
        }
    }
    if (const json* d0 = find_path(cfg.params, "medium.d0")) {
        if (d0->is_number() && std::abs(d0->get<double>()) > 1.0)
            error("params.medium.d0", "must lie in [-1, 1]");
    }

    if (cfg.command == "sweep") {
        if (!cfg.sweep) error("sweep", "command 'sweep' needs a sweep axis");
        if (!cfg.params.contains("command"))
            error("params.command", "command 'sweep' needs an inner command");
        else if (!known_commands.count(
                     cfg.params.value("command", std::string{})) ||
                 cfg.params.value("command", std::string{}) == "sweep")
            error("params.command", "inner command invalid");
    }

    if (cfg.command == "lorenz") {
        double kappa = cfg.params.value("kappa", 1.0);
        double gp = cfg.params.value("gamma_perp", 1.0);
        double gpar = cfg.params.value("gamma_par", 1.0);
        double r = cfg.params.value("r", 1.0);
        if (kappa < gp + gpar && r > 9.0)
            warning("params",
                    "good cavity (kappa < gamma_perp + gamma_par): stationary "
                    "solution stable; no pulsing expected");
    }

    return diags;
}

} // namespace mbloch::cli
