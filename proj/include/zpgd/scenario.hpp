#pragma once

#include "zpgd/profile.hpp"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace zpgd {

enum class ScenarioMode { Freespace, Ball, Annulus, Inviscid, VerifyRh, OracleCompare, Eigen };

std::string_view to_string(ScenarioMode m);

/**
 * A parsed scenario file. The mode-specific sections stay as YAML until
 * run_scenario builds the problem, which is where validation happens.
 */
struct Scenario {
    std::string name;
    std::string description;
    ScenarioMode mode = ScenarioMode::Freespace;
    YAML::Node root;
    std::map<std::string, double> tolerances;  // overrides by check name
};

/// Throws ConfigError on malformed YAML, an unknown mode or a missing section.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/**
 * Profile forms accepted in scenario files:
 *   3.5                                   constant
 *   {constant: 3.5}
 *   {table: [[x0, y0], [x1, y1], ...]}    piecewise linear, constant past the ends
 *   {step: {breaks: [...], values: [...]}}
 *   {poly: {breaks: [...], coeffs: [[...], ...]}}   local power basis per piece
 */
ScalarProfile parse_profile(const YAML::Node& node);

/// Grid forms: [a, b, c, ...] or {from: a, to: b, count: n} (inclusive, uniform).
std::vector<double> parse_grid(const YAML::Node& node);

struct RunOptions {
    std::filesystem::path out_dir = ".";
    double tolerance_scale = 1.0;
    int threads = 1;
    bool write_files = true;
};

struct CheckResult {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool pass = false;
    std::string detail;
};

struct RunReport {
    std::string scenario;
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;
    std::vector<std::filesystem::path> files;
    double seconds = 0.0;

    bool ok() const;
};

/**
 * Builds the problem, runs it, writes CSV, gnuplot data and report.txt under
 * options.out_dir/<name>. DataError / DomainError signal invalid problem data.
 */
RunReport run_scenario(const Scenario& s, const RunOptions& options);

/// Plain-text report: parameters, notes and the check table.
std::string format_report(const Scenario& s, const RunReport& r);

}  // namespace zpgd
