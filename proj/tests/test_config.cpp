#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "config.hpp"

using namespace mbloch::cli;
using nlohmann::json;

namespace {

bool has_error(const std::vector<Diagnostic>& diags, const std::string& path) {
    for (const auto& d : diags)
        if (d.severity == Diagnostic::Severity::error &&
            d.path.find(path) != std::string::npos)
            return true;
    return false;
}

bool has_warning(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Diagnostic::Severity::warning) return true;
    return false;
}

} // namespace

TEST_CASE("empty config yields a missing-command diagnostic") {
    RunConfig cfg;
    auto diags = validate(cfg);
    REQUIRE(!diags.empty());
    CHECK(has_error(diags, "command"));
}

TEST_CASE("unknown command is rejected") {
    RunConfig cfg;
    cfg.command = "explode";
    CHECK(has_error(validate(cfg), "command"));
}

TEST_CASE("reflectivity outside (0, 1] is a range diagnostic") {
    RunConfig cfg;
    cfg.command = "profile";
    cfg.params = json{{"cavity", {{"R_squared", 1.2}}}};
    CHECK(has_error(validate(cfg), "cavity.R_squared"));
    cfg.params = json{{"cavity", {{"R", -0.1}}}};
    CHECK(has_error(validate(cfg), "cavity.R"));
}

TEST_CASE("good-cavity lorenz request with large pump warns, not errors") {
    RunConfig cfg;
    cfg.command = "lorenz";
    cfg.params = json{{"kappa", 1.5}, {"gamma_perp", 1.0},
                      {"gamma_par", 1.0}, {"r", 12.0}};
    auto diags = validate(cfg);
    CHECK(has_warning(diags));
    for (const auto& d : diags)
        CHECK(d.severity != Diagnostic::Severity::error);
}

TEST_CASE("sweep axis sanity") {
    RunConfig cfg;
    cfg.command = "lorenz";
    cfg.params = json{{"r", 2.0}};
    AxisSpec ax;
    ax.param_path = "r";
    ax.n = 1;
    cfg.sweep = ax;
    CHECK(has_error(validate(cfg), "sweep.n"));

    cfg.sweep->n = 5;
    cfg.sweep->param_path = "does.not.exist";
    CHECK(has_error(validate(cfg), "sweep.param_path"));

    cfg.sweep->param_path = "r";
    CHECK(validate(cfg).empty());
}

TEST_CASE("axis values: linear and log") {
    AxisSpec ax;
    ax.start = 0.0;
    ax.stop = 10.0;
    ax.n = 5;
    auto lin = ax.values();
    CHECK(lin.front() == 0.0);
    CHECK(lin.back() == 10.0);
    CHECK(lin[2] == doctest::Approx(5.0));

    ax.scale = AxisSpec::Scale::log;
    ax.start = 0.1;
    ax.stop = 10.0;
    ax.n = 3;
    auto lg = ax.values();
    CHECK(lg[0] == doctest::Approx(0.1));
    CHECK(lg[1] == doctest::Approx(1.0));
    CHECK(lg[2] == doctest::Approx(10.0));
}

TEST_CASE("dotted-path lookup") {
    json j{{"medium", {{"d0", 0.5}, {"nested", {{"x", 1.0}}}}}};
    REQUIRE(find_path(j, "medium.d0"));
    CHECK(find_path(j, "medium.d0")->get<double>() == 0.5);
    REQUIRE(find_path(j, "medium.nested.x"));
    CHECK(!find_path(j, "medium.missing"));
    CHECK(!find_path(j, "other"));
}

TEST_CASE("parse_medium: direct two-level block") {
    json blk{{"gamma_perp", 2.0}, {"gamma_par", 1.0},
             {"g", 3.0},          {"d0", 0.4},
             {"delta", 0.6}};
    auto pm = parse_medium(blk, "normalized");
    CHECK(pm.medium.gamma_perp == 2.0);
    CHECK(pm.medium.d0 == 0.4);
    CHECK(pm.scale == 1.0);
}

TEST_CASE("parse_medium: absolute units normalize gamma_perp to one") {
    json blk{{"gamma_perp", 4.0}, {"gamma_par", 2.0},
             {"g", 8.0},          {"d0", 0.4},
             {"delta", 2.0}};
    auto pm = parse_medium(blk, "absolute");
    CHECK(pm.scale == 4.0);
    CHECK(pm.medium.gamma_perp == 1.0);
    CHECK(pm.medium.gamma_par == doctest::Approx(0.5));
    CHECK(pm.medium.delta == doctest::Approx(0.5));
    CHECK(pm.medium.g == doctest::Approx(0.5)); // divided by gamma_perp^2
}

TEST_CASE("parse_medium: three-level scheme with dominance warning") {
    json blk{{"three_level",
              {{"gamma_21", 1.0}, {"gamma_31", 0.2}, {"gamma_32", 5.0},
               {"gamma_perp", 1.0}, {"R_pump", 3.0}}},
             {"g", 1.0},
             {"delta", 0.0}};
    auto pm = parse_medium(blk, "normalized");
    CHECK(pm.medium.d0 == doctest::Approx(0.5));
    CHECK(pm.medium.gamma_par == doctest::Approx(4.0));
    CHECK(pm.medium.provenance == mbloch::Provenance::three_level);
    CHECK(!pm.warnings.empty()); // gamma_32 not dominant here
}

TEST_CASE("parse_cavity accepts R or R_squared") {
    json blk{{"R_squared", 0.25}, {"L_m", 1.0}, {"L_c", 2.0}, {"c", 1.0}};
    auto cav = parse_cavity(blk, 1.0);
    CHECK(cav.R == doctest::Approx(0.5));
    json blk2{{"R", 0.5}, {"L_m", 1.0}, {"L_c", 2.0}};
    CHECK(parse_cavity(blk2, 1.0).R == 0.5);
}

TEST_CASE("config parse errors carry line information") {
    std::string path = "bad_config_test.json";
    {
        std::ofstream f(path);
        f << "{\n  \"command\": \"modes\",\n  oops\n}\n";
    }
    try {
        load_config(path);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("config round trip from JSON") {
    json j{{"command", "amplify"},
           {"params", {{"task", "curve"}}},
           {"seed", 7},
           {"output", {{"path", "x.csv"}, {"format", "json"}}},
           {"sweep",
            {{"param_path", "medium.d0"}, {"start", 0.1}, {"stop", 0.9},
             {"n", 9}, {"scale", "log"}}}};
    auto cfg = config_from_json(j, "test");
    CHECK(cfg.command == "amplify");
    CHECK(cfg.seed == 7);
    CHECK(cfg.output.format == OutputSpec::Format::json);
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->scale == AxisSpec::Scale::log);
    CHECK(cfg.sweep->n == 9);
}
