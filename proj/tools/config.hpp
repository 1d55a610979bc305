#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbloch/params.hpp"

namespace mbloch::cli {

using nlohmann::json;

struct OutputSpec {
    std::string path;                 // empty = stdout
    enum class Format { csv, json } format = Format::csv;
};

struct AxisSpec {
    std::string param_path;           // dotted path into params
    double start = 0.0, stop = 1.0;
    int n = 2;
    enum class Scale { linear, log } scale = Scale::linear;

    std::vector<double> values() const;
};

struct RunConfig {
    std::string command;
    json params = json::object();
    OutputSpec output;
    std::optional<AxisSpec> sweep;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string units = "normalized"; // or "absolute"
};

// Thrown for malformed configs; message carries file/line context.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

RunConfig load_config(const std::string& path);
RunConfig config_from_json(const json& j, const std::string& origin);

struct Diagnostic {
    enum class Severity { error, warning } severity;
    std::string path;    // JSON path of the offending entry
    std::string message;
};

// Static checks: unknown command, missing blocks, out-of-range values,
// sweep axis sanity, plus physics advisories (e.g. a good-cavity lorenz
// run asking for pulsing). Runnable iff no error-severity entries.
std::vector<Diagnostic> validate(const RunConfig& cfg);

// --- parameter-block helpers -----------------------------------------------

// Effective medium from a config block: either direct two-level constants
// or a three_level/four_level scheme plus g and delta. In "absolute" units
// all rates are rescaled so that gamma_perp = 1; `scale` returns the
// original gamma_perp so field amplitudes can be rescaled consistently.
struct ParsedMedium {
    MediumParams medium;
    double scale = 1.0; // original gamma_perp before normalization
    std::vector<std::string> warnings;
};

ParsedMedium parse_medium(const json& block, const std::string& units);
CavityParams parse_cavity(const json& block, double scale);

// Dotted-path lookup ("medium.d0") inside a JSON object; null if absent.
const json* find_path(const json& root, const std::string& dotted);
json* find_path(json& root, const std::string& dotted);

} // namespace mbloch::cli
