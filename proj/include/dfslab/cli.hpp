// cli.hpp — run configuration, tabular output, and the four subcommands

#pragma once

#include "dfslab/atomic_ensemble.hpp"
#include "dfslab/evolution.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace dfslab::cli {

enum class Geometry { line, square, ring, custom };
enum class OutputFormat { csv, json };

enum ExitCode : int {
    exit_ok = 0,
    exit_verification_failed = 1,
    exit_config_error = 2,
    exit_numerical_error = 3,
    exit_stability_guard = 4,
};

struct ScanSpec {
    std::string parameter; // spacing | side | radius | n
    double start{0.0};
    double stop{0.0};
    int steps{0};
};

struct EvolveSpec {
    std::string initial{"excited"}; // ground | excited | atom:<k> | mode:<m>
    double t_final{5.0};
    double dt{default_dt};
    int stride{10};
    bool fit{true};
};

// Resolved run configuration. Lengths in lambda0, rates in gamma0.
struct RunConfig {
    Geometry geometry{Geometry::line};
    int n{2};
    double spacing{0.25};
    double side{0.25};
    double radius{1.0};
    std::string orientation; // axial|transverse (line), normal|tangential (ring)
    std::vector<Vec3> positions; // custom only
    Vec3 dipole{Vec3::UnitZ()};  // custom only
    bool dicke{false};
    double gamma0{1.0};
    std::optional<ScanSpec> scan;
    std::optional<EvolveSpec> evolve;
    std::string output_path;
    OutputFormat format{OutputFormat::csv};

    // Raw atom positions (custom positions, or the generated geometry).
    std::vector<Vec3> atom_positions() const;
    AtomConfiguration build() const;
    // Configuration with one geometry parameter replaced (scan support).
    AtomConfiguration build_with(const std::string& parameter, double value) const;
    // One-line JSON rendering of every resolved field.
    std::string describe() const;
};

// Parses the key = value sectioned format ([geometry], [scan], [evolve],
// [output]). Throws ConfigError on malformed or inconsistent input.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

using Cell = std::variant<std::monostate, long, double, std::string>;

struct Table {
    std::string config_line;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// 12 significant digits, lowercase exponent.
std::string format_number(double value);

std::string render_csv(const Table& table);
std::string render_json(const Table& table);

Table cmd_spectrum(const RunConfig& config, bool include_full);
Table cmd_scan(const RunConfig& config);
Table cmd_evolve(const RunConfig& config);

struct VerifyOutcome {
    Table table;
    bool all_passed{false};
};
VerifyOutcome cmd_verify(const RunConfig& config, double tol = 1e-9);

// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv);

} // namespace dfslab::cli
