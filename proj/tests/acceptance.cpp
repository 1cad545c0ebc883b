// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "zpgd/bounded_green.hpp"
#include "zpgd/freespace.hpp"
#include "zpgd/gallery.hpp"
#include "zpgd/inviscid.hpp"
#include "zpgd/numerics.hpp"
#include "zpgd/oracles.hpp"
#include "zpgd/scenario.hpp"
#include "zpgd/shockfront.hpp"
#include "zpgd/specfun.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>

using namespace zpgd;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int threads() { return num::default_threads(); }

ScalarProfile table(std::vector<double> x, std::vector<double> y) { return ScalarProfile::linear_table(x, y); }
ScalarProfile step(std::vector<double> b, std::vector<double> v) { return ScalarProfile::step(b, v); }

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return g;
}

RunReport run_bundled(const std::string& name)
{
    RunOptions o;
    o.write_files = false;
    o.threads = threads();
    return run_scenario(parse_scenario(find_scenario(name)->yaml), o);
}

// Every check whose name ends with `suffix` must pass; returns the worst value seen.
Outcome checks_pass(const std::vector<std::string>& scenarios, const std::string& suffix)
{
    bool ok = true;
    int seen = 0;
    double worst = 0.0;
    std::string failed;
    for (const auto& s : scenarios) {
        const auto rep = run_bundled(s);
        for (const auto& c : rep.checks) {
            if (c.name.size() < suffix.size() || c.name.compare(c.name.size() - suffix.size(), suffix.size(), suffix))
                continue;
            ++seen;
            worst = std::max(worst, c.value);
            if (!c.pass) {
                ok = false;
                failed += fmt::format(" {}:{}={:.3e}", s, c.name, c.value);
            }
        }
    }
    return {ok && seen > 0, fmt::format("{} checks, worst {:.3e}{}", seen, worst, failed)};
}

Outcome velocity_bound()
{
    const auto t0 = Clock::now();
    const auto q0 = table({0.0, 0.5, 1.5, 3.0}, {0.0, 0.8, -0.3, 0.0});
    std::mt19937_64 gen(20240601);
    std::uniform_real_distribution<double> ux(-4.0, 4.0), ut(0.05, 10.0);
    double excess = -1.0;
    for (int n : {1, 2, 3}) {
        const auto P = FreespaceProblem::radial(n, 0.1, q0, step({0.0, 2.0}, {1.0, 0.0}));
        const double bound = gradient_sup(P);
        std::vector<std::vector<double>> xs(1000, std::vector<double>(n));
        std::vector<double> ts(1000), speed(1000);
        for (int i = 0; i < 1000; ++i) {
            for (auto& v : xs[i]) v = ux(gen);
            ts[i] = ut(gen);
        }
        num::parallel_for(1000, threads(), [&](std::size_t i) {
            double s2 = 0.0;
            for (double u : velocity(P, xs[i], ts[i])) s2 += u * u;
            speed[i] = std::sqrt(s2);
        });
        for (double s : speed) excess = std::max(excess, s - bound);
    }
    const double secs = seconds_since(t0);
    return {excess <= 1e-8 && secs <= 30.0,
            fmt::format("max(|u| - sup|grad phi0|) = {:.3e} over 3 x 1000 points, {:.1f} s", excess, secs)};
}

Outcome closed_form()
{
    const auto P = FreespaceProblem::radial(1, 0.1, ScalarProfile({0.0}, {{0.0, 1.0}}), step({0.0, 1.0}, {1.0, 0.0}));
    double worst = 0.0;
    for (double x : linspace(-5.0, 5.0, 41))
        for (int k = 0; k < 20; ++k) {
            const double t = 0.1 * std::pow(100.0, k / 19.0);
            const double exact = x / (1.0 + t);
            const std::vector<double> pt{x};
            const double u = velocity(P, pt, t)[0];
            worst = std::max(worst, std::abs(u - exact) / std::max(std::abs(exact), 1e-300) * (exact != 0.0) +
                                        std::abs(u) * (exact == 0.0));
        }
    return {worst <= 1e-6, fmt::format("max relative error {:.3e} on [-5,5] x [0.1,10]", worst)};
}

Outcome mass_conservation()
{
    const auto q0 = table({0.0, 1.0, 2.0}, {0.0, 0.5, 0.5});
    double drift = 0.0;
    for (int n : {1, 2, 3}) {
        const auto P = FreespaceProblem::radial(n, 0.1, q0, step({0.0, 2.0}, {1.0, 0.0}));
        const double m0 = total_mass(P, 0.0, {8}).mass;
        const std::vector<double> times = n == 2 ? std::vector<double>{2.5, 5.0} : linspace(1.0, 5.0, 5);
        for (double t : times) drift = std::max(drift, std::abs(total_mass(P, t, {8}).mass - m0) / m0);
    }
    return {drift <= 1e-5, fmt::format("max relative drift {:.3e} for t in (0, 5], n = 1, 2, 3", drift)};
}

Outcome decay()
{
    const auto q0 = table({0.0, 0.5, 1.0, 1.5}, {0.0, -0.6, 0.4, 0.0});
    double worst = 0.0;
    for (int n : {1, 3}) {
        const auto P = FreespaceProblem::radial(n, 0.1, q0, step({0.0, 1.0}, {1.0, 0.0}));
        double early = 0.0, late = 0.0;
        for (double r : linspace(0.1, 3.0, 30)) {
            early = std::max(early, std::abs(radial_velocity(P, r, 1.0).q));
            late = std::max(late, std::abs(radial_velocity(P, r, 1000.0).q));
        }
        worst = std::max(worst, late / early);
    }
    return {worst <= 0.01, fmt::format("max|u(t=1000)| / max|u(t=1)| = {:.3e} on r in [0.1, 3]", worst)};
}

std::vector<EigenProblem> eigen_cases()
{
    return {EigenProblem::ball(GreenCase::Ball2D, 1.0, 0.05, 0.1), EigenProblem::ball(GreenCase::Ball3D, 1.0, 0.05, 0.1),
            EigenProblem::annulus(GreenCase::Annulus2D, 0.5, 1.0, -0.05, 0.03, 0.1),
            EigenProblem::annulus(GreenCase::Annulus3D, 0.5, 1.0, -0.05, 0.03, 0.1)};
}

Outcome eigenvalues()
{
    double residual = 0.0, halving = 0.0;
    for (const auto& p : eigen_cases()) {
        const auto a = find_eigenvalues(p, 10);
        const auto b = find_eigenvalues(p, 10, ScanOptions{p.root_spacing() / 80.0, 0.0});
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            residual = std::max(residual, std::abs(a.residuals[i]));
            halving = std::max(halving, std::abs(a.values[i] - b.values[i]));
        }
    }
    // Independent ladder: bisection on the standard library's J1.
    const auto closed = find_eigenvalues(EigenProblem::ball(GreenCase::Ball2D, 1.0, 0.0, 0.1), 10);
    double ladder = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double guess = num::pi * (k + 1.25);
        double lo = guess - 0.5, hi = guess + 0.5;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (std::cyl_bessel_j(1.0, lo) * std::cyl_bessel_j(1.0, mid) <= 0.0 ? hi : lo) = mid;
        }
        ladder = std::max(ladder, std::abs(closed.values[k] - 0.5 * (lo + hi)));
    }
    return {residual <= 1e-10 && halving <= 1e-10 && ladder <= 1e-10,
            fmt::format("max residual {:.2e}, scan-halving shift {:.2e}, J1 ladder gap {:.2e}", residual, halving, ladder)};
}

std::vector<BoundedProblem> green_cases()
{
    const auto lin = [](double b, double c0, double c1) { return ScalarProfile({b}, {{c0, c1}}); };
    return {
        BoundedProblem::ball(GreenCase::Ball2D, 1.0, 0.1, lin(0.0, -0.2, 0.0), ScalarProfile::constant(1.0), -0.2,
                             ScalarProfile::constant(1.0)),
        BoundedProblem::ball(GreenCase::Ball3D, 1.0, 0.1, lin(0.0, 0.0, 0.3), table({0.0, 1.0}, {1.0, 2.0}), 0.3),
        BoundedProblem::annulus(GreenCase::Annulus2D, 0.5, 1.0, 0.1, lin(0.5, 0.1, 0.2), ScalarProfile::constant(1.0),
                                0.1, 0.2, ScalarProfile::constant(1.0)),
        BoundedProblem::annulus(GreenCase::Annulus3D, 0.5, 1.0, 0.1, table({0.5, 0.75, 1.0}, {0.0, 0.2, 0.0}),
                                ScalarProfile::constant(1.0), 0.0, 0.0),
    };
}

Outcome green_series()
{
    double min_order = 1e300, robin = 0.0;
    for (const auto& P : green_cases()) {
        GreenOptions opts;
        opts.min_terms = 200;
        const BoundedSolution sol(P, opts);
        const double T = 2.0 * P.length() * P.length() / P.epsilon;
        for (double f : {0.05, 0.1, 0.5, 1.0}) robin = std::max(robin, sol.robin_residual(f * T));

        const double a = P.r_inner() + 0.2 * P.length(), b = P.r_outer() - 0.2 * P.length();
        double prev = 0.0;
        for (int level = 0; level < 3; ++level) {
            const int m = 40 << level;
            const auto s = hopf_cole_boundary_state(sol, linspace(a, b, m + 1), linspace(0.4, 0.6, m + 1));
            const auto res = heat_residual(s, P.epsilon, P.dimension());
            double worst = 0.0, scale = 0.0;
            const std::size_t nr = s.r.size();
            for (std::size_t it = 3; it + 3 < s.t.size(); ++it)
                for (std::size_t ir = 3; ir + 3 < nr; ++ir) {
                    worst = std::max(worst, std::abs(res[it * nr + ir]));
                    scale = std::max(scale, std::abs(s.a[it * nr + ir]));
                }
            worst /= scale;
            if (level > 0) min_order = std::min(min_order, std::log2(prev / worst));
            prev = worst;
        }
    }
    return {min_order >= 1.8 && robin <= 1e-6,
            fmt::format("smallest heat-residual order {:.2f}, max Robin residual {:.2e} (N >= 200, t >= 0.05 T)",
                        min_order, robin)};
}

Outcome series_vs_fd()
{
    bool ok = true;
    std::string detail;
    for (const char* name : {"fd-ball3d", "fd-annulus2d"}) {
        const auto t0 = Clock::now();
        const auto rep = run_bundled(name);
        const double secs = seconds_since(t0);
        for (const auto& c : rep.checks)
            if (c.name == "fd-velocity") detail += fmt::format("{} {:.2e} in {:.1f} s; ", name, c.value, secs);
        ok = ok && rep.ok() && secs <= 120.0;
    }
    return {ok, detail};
}

Outcome brute_force()
{
    bool ok = true;
    std::string detail;
    for (const char* name : {"brute-inflow", "brute-signchange", "brute-absorbing"}) {
        const auto s = parse_scenario(find_scenario(name)->yaml);
        const auto& p = s.root["problem"];
        const auto P = InviscidProblem::make(p["n"].as<int>(), parse_profile(p["q0"]), parse_profile(p["p0"]),
                                             parse_profile(p["q_B"]), parse_profile(p["p_B"]));
        const auto t0 = Clock::now();
        const auto r = linspace(0.05, 2.0, 50), t = linspace(0.2, 2.0, 50);
        const auto brute = oracle::brute_force_panel(P, r, t, 2000, threads());
        std::vector<double> exact(brute.size());
        num::parallel_for(brute.size(), threads(), [&](std::size_t k) {
            exact[k] = minimize_paths(P, r[k % r.size()], t[k / r.size()]).value;
        });
        double gap = 0.0;
        for (std::size_t k = 0; k < brute.size(); ++k) gap = std::max(gap, std::abs(brute[k].value - exact[k]));
        const double secs = seconds_since(t0);
        ok = ok && gap <= 1e-4 && secs <= 120.0;
        detail += fmt::format("{} {:.2e} in {:.1f} s; ", name, gap, secs);
    }
    return {ok, detail};
}

Outcome weak_boundary()
{
    std::vector<std::string> names;
    for (const auto& e : scenario_gallery())
        if (parse_scenario(e.yaml).mode == ScenarioMode::Inviscid) names.push_back(e.name);
    return checks_pass(names, "weak-boundary");
}

Outcome rankine_hugoniot()
{
    const auto a = checks_pass({"riemann-1d"}, ":rh-speed");
    const auto b = checks_pass({"riemann-1d"}, ":rh-mass");
    const auto c = checks_pass({"sticky-riemann-1d"}, "sticky-trajectory");
    return {a.pass && b.pass && c.pass, fmt::format("speed: {}; mass: {}; sticky: {}", a.detail, b.detail, c.detail)};
}

Outcome multid()
{
    const auto a = checks_pass({"riemann-2d", "riemann-3d"}, ":rh-multid");
    const double k = mean_curvature(3, 2.0);
    return {a.pass && k == -0.5, fmt::format("{}; K(3, 2) = {}", a.detail, k)};
}

Outcome vanishing_viscosity()
{
    const auto rep = run_bundled("viscosity-sweep-1d");
    std::string detail;
    for (const auto& c : rep.checks) detail += fmt::format("{} {:.3g}; ", c.name, c.value);
    return {rep.ok(), detail};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"velocity bound", velocity_bound},
        {"free-space closed form", closed_form},
        {"mass conservation", mass_conservation},
        {"large-time decay", decay},
        {"eigenvalues", eigenvalues},
        {"Green's series", green_series},
        {"series vs finite differences", series_vs_fd},
        {"mass-flux identities", [] { return checks_pass({"ball3d-outflow", "ball2d-inflow", "annulus2d-through",
                                                          "annulus3d-closed"}, "mass-flux"); }},
        {"path minimizer vs brute force", brute_force},
        {"weak boundary conditions", weak_boundary},
        {"Rankine-Hugoniot", rankine_hugoniot},
        {"multi-D Rankine-Hugoniot", multid},
        {"vanishing viscosity", vanishing_viscosity},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        failures += !o.pass;
        std::cout << fmt::format("{} {:>2} {:<30} {} [{:.1f} s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                                 o.detail, seconds_since(t0))
                  << std::flush;
    }
    return failures ? 1 : 0;
}
