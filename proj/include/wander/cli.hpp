#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace wander {

using ordered_json = nlohmann::ordered_json;

// Everything a subcommand run depends on; no hidden state, no randomness.
// A config parsed from the command line round-trips through its JSON form
// losslessly, so any invocation can be replayed from a --config file.
struct RunConfig {
    std::string subcommand;  // "tables derive", "classify", "fit", ...
    std::string word;
    std::string start = "Core";        // "Core" | "G:k" | "B:k"
    std::int64_t k_max = 1000;
    std::int64_t horizon = 1000;
    std::int64_t example = 3;          // 1 | 3
    std::int64_t n = 2;                // family count (example 3) / ray count (example 1)
    double t = 1.2;                    // truncation height / radius
    std::string target = "alpha";      // "alpha" | "beta" | "gamma" (or f|g|h)
    std::int64_t degree = 120;
    double lambda = 0.0;
    bool refine = true;                // tolerance-weighted fit with derivative control
    std::int64_t lawson_iterations = 1;
    double derivative_penalty = 0.3;
    double spacing = 0.05;             // fit grid step; verify fresh-sample step
    double resolution = 20.0;          // complement check, pixels per unit
    double viewport_x0 = -16.0;        // render window
    double viewport_x1 = 16.0;
    double viewport_y0 = -4.0;
    double viewport_y1 = 4.0;
    std::int64_t width = 640;          // render pixel grid
    std::int64_t height = 160;
    std::string map;                   // fixedpoint generator letter f|g|h
    std::vector<std::string> map_files;  // fitted-map inputs, outermost first
    std::string out;                   // output file (render image, fit approximant)

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

ordered_json run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const ordered_json& j);

// Parses the argument list (no program name) and executes the subcommand.
// Structured results go to `out` as JSON; diagnostics go to `err` one line
// each.  Returns 0 on success, 1 when a verification-style check fails
// (verify report, fixed-point convergence, complement connectivity), 2 on
// usage or input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wander
