#pragma once

// Command-line front end for the selfsim library.
//
// Configuration is assembled from three layers: built-in defaults, an
// optional JSON file (--config) and command-line flags, later layers winning.

#include "selfsim/families.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace selfsim::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,
    kDomainError = 2,
    kConvergenceError = 3,
};

struct RunConfig {
    std::string command;            // eval, branch-eval, sample, verify, adjudicate, list
    std::string family;             // empty: all families for `list`
    int branch = 1;
    double constant = 1.0;
    families::FamilyParams params;

    // eval
    std::string fn;                 // 1f1, 2f1, 0f2, 1f3, 3f2, pfq, psi2, kdf
    std::optional<double> a, b, c, c1, c2;
    std::vector<double> num, den;
    std::vector<double> num_joint, num_x, num_y, den_joint, den_x, den_y;
    unsigned deriv = 0, dx = 0, dy = 0;

    // point (eval uses x and y as series arguments)
    std::optional<double> x, y, t;

    // grids as "min:max:count[:log|lin]"
    std::optional<std::string> grid_x, grid_y, grid_t;
    std::optional<double> h;
    bool ode = false;
    unsigned threads = 1;

    double rel_tol = 1e-12;
    std::size_t max_terms = 10000;
    std::size_t consecutive_small = 3;

    std::string out;                // empty: standard output
    std::string summary;            // verify: JSON summary path next to CSV rows
    std::string format = "csv";

    // Throws std::invalid_argument when required keys are missing or malformed.
    void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
RunConfig from_json(const nlohmann::json& j);

struct ParseResult {
    RunConfig config;
    bool dump_config = false;
    bool help = false;
    std::string help_text;
};

// Throws std::invalid_argument on unknown flags or unreadable config files.
ParseResult parse_args(int argc, const char* const* argv);

// "0.5:2:5:log" style axis description.
std::string format_axis(double min, double max, int count, bool log);

// Executes one command. Errors are reported on `err` and mapped to ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run, with --dump-config handling.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// 17 significant digits.
std::string fmt(double v);

} // namespace selfsim::cli
