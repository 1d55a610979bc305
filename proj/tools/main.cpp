#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mbloch: ring-laser amplification, lasing and single-mode "
                 "dynamics toolkit"};

    std::string config_path;
    std::string out_path;
    std::string format;
    int threads = 0;
    std::uint64_t seed = 0;
    bool validate_only = false;

    app.add_option("--config", config_path, "Run configuration (JSON)")
        ->required();
    app.add_option("--out", out_path, "Output file (default: config value or stdout)");
    app.add_option("--format", format, "Output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads,
                   "Sweep worker threads (fallback: MBLOCH_THREADS)");
    app.add_option("--seed", seed, "Seed for seeded perturbations");
    app.add_flag("--validate-only", validate_only,
                 "Check the config and exit");

    CLI11_PARSE(app, argc, argv);

    mbloch::cli::RunConfig cfg;
    try {
        cfg = mbloch::cli::load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    if (!out_path.empty()) cfg.output.path = out_path;
    if (format == "csv") cfg.output.format = mbloch::cli::OutputSpec::Format::csv;
    if (format == "json")
        cfg.output.format = mbloch::cli::OutputSpec::Format::json;
    if (app.count("--seed")) cfg.seed = seed;
    if (threads > 0) {
        cfg.threads = threads;
    } else if (const char* env = std::getenv("MBLOCH_THREADS")) {
        cfg.threads = std::max(1, std::atoi(env));
    }

    return mbloch::cli::run(cfg, validate_only);
}
