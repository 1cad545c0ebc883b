#include "zpgd/bounded_green.hpp"
#include "zpgd/errors.hpp"
#include "zpgd/gallery.hpp"
#include "zpgd/numerics.hpp"
#include "zpgd/scenario.hpp"
#include "zpgd/specfun.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace zpgd;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kParse = 2, kInvalid = 3 };

struct Common {
    fs::path out = "zpgd-out";
    double tolerance_scale = 1.0;
    int threads = 0;

    RunOptions options() const
    {
        RunOptions o;
        o.out_dir = out;
        o.tolerance_scale = tolerance_scale;
        o.threads = threads > 0 ? threads : num::default_threads();
        return o;
    }
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
    cmd->add_option("--tolerance-scale", c.tolerance_scale, "Multiplier for every check tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", c.threads, "Worker threads (default: ZPGD_THREADS or 1)");
}

// Runs one scenario, mapping failures to exit codes.
int run_one(const Scenario& s, const RunOptions& o, bool verbose)
{
    try {
        const auto rep = run_scenario(s, o);
        if (verbose) std::cout << format_report(s, rep);
        else
            std::cout << fmt::format("{:<4} {:<26} {:>7.2f} s  ({} checks)\n", rep.ok() ? "PASS" : "FAIL", s.name,
                                     rep.seconds, rep.checks.size());
        if (!rep.ok() && !verbose)
            for (const auto& c : rep.checks)
                if (!c.pass)
                    std::cout << fmt::format("       {} = {:.4e} (limit {:.4e}) {}\n", c.name, c.value, c.limit,
                                             c.detail);
        return rep.ok() ? kOk : kCheckFailed;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kParse;
    } catch (const DataError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kInvalid;
    } catch (const DomainError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << s.name << ": " << e.what() << "\n";
        return kCheckFailed;
    }
}

Scenario scenario_from(const std::string& config, const std::string& name)
{
    if (!config.empty()) return load_scenario(config);
    const auto* e = find_scenario(name);
    if (!e) throw ConfigError(fmt::format("no bundled scenario named '{}'", name));
    return parse_scenario(e->yaml);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Zero-pressure gas dynamics and adhesion solutions: solver and verification runs"};
    app.require_subcommand(1);

    Common common;
    std::string config, name;

    auto* run = app.add_subcommand("run", "Run a scenario file (or a bundled scenario)");
    add_common(run, common);
    auto* cfg = run->add_option("--config", config, "Scenario YAML file");
    run->add_option("--scenario", name, "Bundled scenario name")->excludes(cfg);

    auto* list = app.add_subcommand("list-scenarios", "List the bundled scenarios");
    std::string show;
    fs::path dump;
    list->add_option("--show", show, "Print the YAML of one scenario");
    list->add_option("--write", dump, "Write every bundled scenario to this directory");

    auto* eigen = app.add_subcommand("eigen", "Print eigenvalues of a Green's-function case as CSV");
    std::string kind = "Ball2D";
    double R = 1.0, R1 = 0.5, R2 = 1.0, eps = 0.1, qB = 0.0, q1 = 0.0, q2 = 0.0;
    int count = 5;
    eigen->add_option("--case", kind, "Ball2D, Ball3D, Annulus2D or Annulus3D")->capture_default_str();
    eigen->add_option("--R", R)->capture_default_str();
    eigen->add_option("--R1", R1)->capture_default_str();
    eigen->add_option("--R2", R2)->capture_default_str();
    eigen->add_option("--epsilon", eps)->capture_default_str();
    eigen->add_option("--qB", qB, "Boundary velocity (ball)")->capture_default_str();
    eigen->add_option("--q1", q1, "Inner boundary velocity (annulus)")->capture_default_str();
    eigen->add_option("--q2", q2, "Outer boundary velocity (annulus)")->capture_default_str();
    eigen->add_option("--count", count)->check(CLI::PositiveNumber)->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Run scenario files (default: the whole bundled gallery)");
    Common vcommon;
    add_common(verify, vcommon);
    std::vector<std::string> configs;
    verify->add_option("--config", configs, "Scenario YAML files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kParse;
    }

    if (*run) {
        if (config.empty() && name.empty()) {
            std::cerr << "run: give --config or --scenario\n";
            return kParse;
        }
        try {
            return run_one(scenario_from(config, name), common.options(), true);
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return kParse;
        }
    }

    if (*list) {
        if (!show.empty()) {
            const auto* e = find_scenario(show);
            if (!e) {
                std::cerr << "no bundled scenario named '" << show << "'\n";
                return kParse;
            }
            std::cout << e->yaml;
            return kOk;
        }
        if (!dump.empty()) fs::create_directories(dump);
        for (const auto& e : scenario_gallery()) {
            std::cout << fmt::format("{:<26} {}\n", e.name, e.description);
            if (!dump.empty()) std::ofstream(dump / (e.name + ".yaml")) << e.yaml;
        }
        return kOk;
    }

    if (*eigen) {
        try {
            const auto c = green_case_from_string(kind);
            const auto p = is_ball(c) ? EigenProblem::ball(c, R, qB, eps) : EigenProblem::annulus(c, R1, R2, q1, q2, eps);
            write_eigen_csv(std::cout, find_eigenvalues(p, count));
            return kOk;
        } catch (const DataError& e) {
            std::cerr << "validation error: " << e.what() << "\n";
            return kInvalid;
        } catch (const DomainError& e) {
            std::cerr << "validation error: " << e.what() << "\n";
            return kInvalid;
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return kCheckFailed;
        }
    }

    // verify
    int worst = kOk;
    const auto o = vcommon.options();
    const auto record = [&](int code) {
        if (code == kParse || worst == kParse) worst = kParse;
        else worst = std::max(worst, code);
    };
    if (configs.empty()) {
        for (const auto& e : scenario_gallery()) record(run_one(parse_scenario(e.yaml), o, false));
    } else {
        for (const auto& path : configs) {
            try {
                record(run_one(load_scenario(path), o, false));
            } catch (const ConfigError& e) {
                std::cerr << "config error: " << path << ": " << e.what() << "\n";
                record(kParse);
            }
        }
    }
    return worst;
}
