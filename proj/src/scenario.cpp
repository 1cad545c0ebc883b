#include "zpgd/scenario.hpp"

#include "zpgd/bounded_green.hpp"
#include "zpgd/errors.hpp"
#include "zpgd/freespace.hpp"
#include "zpgd/inviscid.hpp"
#include "zpgd/numerics.hpp"
#include "zpgd/oracles.hpp"
#include "zpgd/shockfront.hpp"
#include "zpgd/specfun.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace zpgd {

namespace fs = std::filesystem;

std::string_view to_string(ScenarioMode m)
{
    switch (m) {
    case ScenarioMode::Freespace: return "freespace";
    case ScenarioMode::Ball: return "ball";
    case ScenarioMode::Annulus: return "annulus";
    case ScenarioMode::Inviscid: return "inviscid";
    case ScenarioMode::VerifyRh: return "verify-rh";
    case ScenarioMode::OracleCompare: return "oracle-compare";
    case ScenarioMode::Eigen: return "eigen";
    }
    return "?";
}

namespace {

ScenarioMode mode_from(const std::string& s)
{
    for (auto m : {ScenarioMode::Freespace, ScenarioMode::Ball, ScenarioMode::Annulus, ScenarioMode::Inviscid,
                   ScenarioMode::VerifyRh, ScenarioMode::OracleCompare, ScenarioMode::Eigen})
        if (to_string(m) == s) return m;
    throw ConfigError(fmt::format("unknown mode '{}'", s));
}

const YAML::Node need(const YAML::Node& node, const char* key)
{
    const YAML::Node v = node[key];
    if (!v) throw ConfigError(fmt::format("missing key '{}'", key));
    return v;
}

template <class T>
T get(const YAML::Node& node, const char* key, const T& fallback)
{
    const YAML::Node v = node[key];
    return v ? v.as<T>() : fallback;
}

template <class T>
T req(const YAML::Node& node, const char* key)
{
    return need(node, key).as<T>();
}

}  // namespace

ScalarProfile parse_profile(const YAML::Node& node)
{
    try {
        if (!node) throw ConfigError("missing profile");
        if (node.IsScalar()) return ScalarProfile::constant(node.as<double>());
        if (!node.IsMap()) throw ConfigError("profile must be a number or a map");
        if (node["constant"]) return ScalarProfile::constant(node["constant"].as<double>());
        if (node["table"]) {
            std::vector<double> x, y;
            for (const auto& row : node["table"]) {
                const auto v = row.as<std::vector<double>>();
                if (v.size() != 2) throw ConfigError("table rows must be [x, y]");
                x.push_back(v[0]);
                y.push_back(v[1]);
            }
            return ScalarProfile::linear_table(x, y);
        }
        if (node["step"]) {
            const auto b = req<std::vector<double>>(node["step"], "breaks");
            const auto v = req<std::vector<double>>(node["step"], "values");
            return ScalarProfile::step(b, v);
        }
        if (node["poly"]) {
            return ScalarProfile(req<std::vector<double>>(node["poly"], "breaks"),
                                 req<std::vector<std::vector<double>>>(node["poly"], "coeffs"));
        }
        throw ConfigError("profile needs one of constant, table, step, poly");
    } catch (const YAML::Exception& e) {
        throw ConfigError(fmt::format("bad profile: {}", e.what()));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("bad profile: {}", e.what()));
    }
}

std::vector<double> parse_grid(const YAML::Node& node)
{
    try {
        if (!node) throw ConfigError("missing grid");
        if (node.IsSequence()) return node.as<std::vector<double>>();
        const double a = req<double>(node, "from"), b = req<double>(node, "to");
        const int count = req<int>(node, "count");
        if (count < 1) throw ConfigError("grid count must be >= 1");
        std::vector<double> g(count);
        for (int i = 0; i < count; ++i) g[i] = count == 1 ? a : a + (b - a) * i / (count - 1);
        return g;
    } catch (const YAML::Exception& e) {
        throw ConfigError(fmt::format("bad grid: {}", e.what()));
    }
}

Scenario parse_scenario(const std::string& text)
{
    Scenario s;
    try {
        s.root = YAML::Load(text);
        if (!s.root.IsMap()) throw ConfigError("scenario must be a map");
        s.name = req<std::string>(s.root, "name");
        s.description = get<std::string>(s.root, "description", "");
        s.mode = mode_from(req<std::string>(s.root, "mode"));
        need(s.root, "problem");
        if (const auto t = s.root["tolerances"])
            for (const auto& kv : t) s.tolerances[kv.first.as<std::string>()] = kv.second.as<double>();
    } catch (const YAML::Exception& e) {
        throw ConfigError(e.what());
    }
    if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos)
        throw ConfigError("scenario name must be a plain, non-empty file name");
    return s;
}

Scenario load_scenario(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open {}", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

bool RunReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ctx {
    const Scenario& s;
    const RunOptions& o;
    RunReport& rep;
    fs::path dir;

    const YAML::Node problem() const { return s.root["problem"]; }

    double tol(const std::string& name, double fallback) const
    {
        const auto it = s.tolerances.find(name);
        return (it == s.tolerances.end() ? fallback : it->second) * o.tolerance_scale;
    }
    bool wants(const std::string& check) const
    {
        const auto c = s.root["checks"];
        if (!c) return true;
        for (const auto& x : c)
            if (x.as<std::string>() == check) return true;
        return false;
    }
    // Passes when value <= limit.
    void at_most(const std::string& name, double value, double limit, std::string detail = {})
    {
        rep.checks.push_back({name, value, limit, value <= limit, std::move(detail)});
    }
    void at_least(const std::string& name, double value, double limit, std::string detail = {})
    {
        rep.checks.push_back({name, value, limit, value >= limit, detail.empty() ? ">= limit" : detail});
    }
    void note(std::string n) { rep.notes.push_back(std::move(n)); }

    std::ofstream open(const std::string& file)
    {
        const fs::path p = dir / file;
        std::ofstream f(p);
        if (!f) throw std::runtime_error(fmt::format("cannot write {}", p.string()));
        rep.files.push_back(p);
        return f;
    }

    void write_field(const std::string& stem, const RadialField& field)
    {
        if (!o.write_files) return;
        {
            auto f = open(stem + ".csv");
            write_csv(f, field);
        }
        // gnuplot: one block per time slice.
        auto g = open(stem + ".dat");
        g << "# r t q p\n";
        for (std::size_t it = 0; it < field.t.size(); ++it) {
            for (std::size_t ir = 0; ir < field.r.size(); ++ir) {
                const auto k = field.index(it, ir);
                g << fmt::format("{:.17g} {:.17g} {:.17g} {:.17g}\n", field.r[ir], field.t[it], field.q[k],
                                 field.p.empty() ? 0.0 : field.p[k]);
            }
            g << "\n\n";
        }
    }
};

FreespaceProblem freespace_from(const YAML::Node& p)
{
    return FreespaceProblem::radial(req<int>(p, "n"), req<double>(p, "epsilon"), parse_profile(need(p, "q0")),
                                    parse_profile(need(p, "rho0")));
}

BoundedProblem bounded_from(const YAML::Node& p)
{
    const auto kind = green_case_from_string(req<std::string>(p, "kind"));
    const double eps = req<double>(p, "epsilon");
    const auto opt = [&](const char* key) -> std::optional<ScalarProfile> {
        if (p[key]) return parse_profile(p[key]);
        return std::nullopt;
    };
    if (is_ball(kind))
        return BoundedProblem::ball(kind, req<double>(p, "R"), eps, parse_profile(need(p, "q0")),
                                    parse_profile(need(p, "rho0")), get<double>(p, "q_B", 0.0), opt("rho_B"));
    return BoundedProblem::annulus(kind, req<double>(p, "R1"), req<double>(p, "R2"), eps, parse_profile(need(p, "q0")),
                                   parse_profile(need(p, "rho0")), get<double>(p, "q1", 0.0), get<double>(p, "q2", 0.0),
                                   opt("rho1"), opt("rho2"));
}

InviscidProblem inviscid_from(const YAML::Node& p)
{
    const auto prof = [&](const char* key) {
        return p[key] ? parse_profile(p[key]) : ScalarProfile::constant(0.0);
    };
    return InviscidProblem::make(req<int>(p, "n"), parse_profile(need(p, "q0")), parse_profile(need(p, "p0")),
                                 prof("q_B"), prof("p_B"));
}

double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// ---------------------------------------------------------------------------

void run_freespace(Ctx& c)
{
    const auto P = freespace_from(c.problem());
    const auto r = parse_grid(need(need(c.s.root, "grid"), "r"));
    const auto t = parse_grid(need(need(c.s.root, "grid"), "t"));
    const bool with_density = get<bool>(c.s.root, "density", true);
    const int n = P.n;

    RadialField f;
    f.n = n;
    f.epsilon = P.epsilon;
    f.r = r;
    f.t = t;
    f.q.assign(r.size() * t.size(), 0.0);
    f.p.assign(r.size() * t.size(), 0.0);
    num::parallel_for(f.q.size(), c.o.threads, [&](std::size_t k) {
        const double rr = r[k % r.size()], tt = t[k / r.size()];
        if (tt == 0.0) {
            f.q[k] = (*P.q0)(rr);
            f.p[k] = std::pow(rr, n - 1) * P.rho0(rr);
            return;
        }
        f.q[k] = radial_velocity(P, rr, tt).q;
        if (with_density) {
            std::vector<double> x(n, 0.0);
            x[0] = rr;
            f.p[k] = std::pow(rr, n - 1) * density(P, x, tt);
        }
    });
    f.validate();
    c.write_field("solution", f);

    if (c.wants("velocity-bound")) {
        const double sup = gradient_sup(P);
        if (std::isfinite(sup)) c.at_most("velocity-bound", max_abs(f.q) - sup, c.tol("velocity-bound", 1e-8),
                                          fmt::format("max|q| - sup|q0|, sup|q0| = {:.6g}", sup));
        else c.note("velocity-bound skipped: q0 is unbounded");
    }
    if (c.wants("mass") && std::isfinite(P.rho0.support_end())) {
        const QuadratureSpec spec{get<int>(c.s.root, "mass_panels", 8)};
        const double m0 = total_mass(P, 0.0, spec).mass;
        double drift = 0.0;
        for (double tt : t)
            if (tt > 0.0) drift = std::max(drift, std::abs(total_mass(P, tt, spec).mass - m0) / m0);
        c.at_most("mass", drift, c.tol("mass", 1e-5), fmt::format("relative drift, m(0) = {:.12g}", m0));
    }
    if (const auto ref = c.s.root["reference"]; ref && c.wants("closed-form")) {
        // q0 = a r has the exact solution q = a r / (1 + a t).
        const double a = req<double>(ref, "slope");
        double worst = 0.0;
        for (std::size_t it = 0; it < t.size(); ++it)
            for (std::size_t ir = 0; ir < r.size(); ++ir) {
                const double exact = a * r[ir] / (1.0 + a * t[it]);
                const double q = f.q[f.index(it, ir)];
                worst = std::max(worst, std::abs(q - exact) / std::max(std::abs(exact), 1e-300));
            }
        c.at_most("closed-form", worst, c.tol("closed-form", 1e-6), "relative error against a r / (1 + a t)");
    }
    if (const auto d = c.s.root["decay"]; d && c.wants("decay")) {
        const double t1 = req<double>(d, "t_ref"), t2 = req<double>(d, "t_late");
        const auto pts = parse_grid(need(d, "r"));
        double q1 = 0.0, q2 = 0.0;
        for (double rr : pts) {
            q1 = std::max(q1, std::abs(radial_velocity(P, rr, t1).q));
            q2 = std::max(q2, std::abs(radial_velocity(P, rr, t2).q));
        }
        c.at_most("decay", q2 / q1, c.tol("decay", 1e-2),
                  fmt::format("max|q(t={})| / max|q(t={})|", t2, t1));
    }
}

void run_bounded(Ctx& c)
{
    const auto P = bounded_from(c.problem());
    if ((c.s.mode == ScenarioMode::Ball) != is_ball(P.kind))
        throw DataError(fmt::format("mode {} does not match kind {}", to_string(c.s.mode), to_string(P.kind)));
    BoundedSolution S(P);
    const auto r = parse_grid(need(need(c.s.root, "grid"), "r"));
    const auto t = parse_grid(need(need(c.s.root, "grid"), "t"));
    const auto f = S.sample(r, t, get<bool>(c.s.root, "density", true), c.o.threads);
    c.write_field("solution", f);
    if (c.o.write_files) {
        auto e = c.open("eigen.csv");
        write_eigen_csv(e, S.evaluator().eigenvalues());
    }
    const auto& modes = S.evaluator().modes();
    c.note(fmt::format("{} oscillatory terms, {} modes in total, t_floor = {:.6g}", S.evaluator().truncation_count(),
                       modes.size(), S.t_floor()));
    c.note(fmt::format("large-time velocity at mid-domain: {:.12g}",
                       S.large_time_velocity(0.5 * (P.r_inner() + P.r_outer()))));

    if (c.wants("robin")) {
        const double t_min = get<double>(c.s.root, "robin_t_min", S.t_floor());
        double worst = 0.0;
        for (double tt : t)
            if (tt >= t_min) worst = std::max(worst, S.robin_residual(tt));
        c.at_most("robin", worst, c.tol("robin", 1e-6), "max |eps a_r + q a| / |a| on the boundary");
    }
    if (c.wants("mass-flux")) {
        double worst = 0.0;
        for (double tt : t) {
            if (tt <= 0.0) continue;
            const double h = 1e-2 * tt;
            if (tt - h < S.t_floor()) continue;
            const double dm = (S.mass(tt + h).mass - S.mass(tt - h).mass) / (2.0 * h);
            worst = std::max(worst, std::abs(dm - S.mass_flux(tt)));
        }
        c.at_most("mass-flux", worst, c.tol("mass-flux", 1e-4), "|dm/dt + omega [q p]| over grid times");
    }
}

void run_inviscid(Ctx& c)
{
    const auto P = inviscid_from(c.problem());
    const auto r = parse_grid(need(need(c.s.root, "grid"), "r"));
    const auto t = parse_grid(need(need(c.s.root, "grid"), "t"));
    const auto f = solve_panel(P, r, t, c.o.threads);
    c.write_field("solution", f);

    std::vector<double> tb;
    for (double tt : t)
        if (tt > 0.0) tb.push_back(tt);
    const auto origin = sample_origin(P, tb);
    if (c.o.write_files) {
        auto o = c.open("origin.csv");
        o << "t,q,mass\n";
        for (const auto& s : origin) o << fmt::format("{:.17g},{:.17g},{:.17g}\n", s.t, s.q, s.mass);
    }
    if (c.wants("weak-boundary")) {
        const auto rep = weak_boundary_check(P, origin);
        for (const auto& v : rep.violations) c.note(v);
        c.at_most("weak-boundary", static_cast<double>(rep.violations.size()), 0.0,
                  fmt::format("violations over {} times", rep.checked));
    }
    int flagged = 0, boundary = 0;
    for (std::size_t k = 0; k < f.q.size(); ++k) {
        flagged += f.flags[k] != 0;
        boundary += f.branch[k] == 'B';
    }
    c.note(fmt::format("{} samples on the boundary branch, {} flagged", boundary, flagged));
}

void check_front(Ctx& c, const ShockFront& front, const std::string& label, bool rh_tolerance)
{
    const auto r1 = rh_residual_1d(front);
    const auto rm = rh_residual_multid(front);
    if (r1.res_speed.empty()) {
        c.note(fmt::format("{}: fewer than 3 samples, residuals skipped", label));
        return;
    }
    double gap = -kInf, entropy = 0.0, e_min = kInf;
    for (std::size_t i = 0; i < r1.res_speed.size(); ++i) {
        gap = std::max(gap, std::abs(rm.mass_scaled[i]) - std::abs(r1.res_mass[i]));
        gap = std::max(gap, std::abs(rm.speed[i]) - std::abs(r1.res_speed[i]));
        const double sd = 0.5 * (front.q_plus[i] + front.q_minus[i]);
        entropy = std::max({entropy, sd - front.q_minus[i], front.q_plus[i] - sd});
        e_min = std::min(e_min, front.e[i]);
    }
    c.at_most(label + ":rh-multid", gap, c.tol("rh-multid", 1e-10), "max(|multid| - |1-D|)");
    c.at_most(label + ":entropy", entropy, c.tol("entropy", 1e-9), "max(ds/dt - q-, q+ - ds/dt)");
    c.at_least(label + ":delta-mass", e_min, -c.tol("delta-mass", 1e-12), "min e(t)");
    if (rh_tolerance) {
        c.at_most(label + ":rh-speed", max_abs(r1.res_speed), c.tol("rh-speed", 1e-3), "max |ds/dt - (q+ + q-)/2|");
        c.at_most(label + ":rh-mass", max_abs(r1.res_mass), c.tol("rh-mass", 1e-3),
                  "max |de/dt - ([qp] - [p] ds/dt)|, [f] = f(s-) - f(s+)");
    }
    if (front.n >= 2) {
        double worst = 0.0;
        for (double s : front.s) worst = std::max(worst, std::abs(mean_curvature_fd(front.n, s) - mean_curvature(front.n, s)));
        c.at_most(label + ":curvature", worst, c.tol("curvature", 1e-6), "|K_fd - K| along the front");
    }
    if (c.o.write_files) {
        auto f = c.open(label + ".csv");
        write_front_csv(f, front);
    }
}

void run_verify_rh(Ctx& c)
{
    const auto P = inviscid_from(c.problem());
    c.note("jump convention: [f] = f(s-) - f(s+), inner minus outer; e = P(s+) - P(s-) >= 0");
    const auto k = mean_curvature(3, 2.0);
    c.at_most("curvature-spot", std::abs(k + 0.5), 0.0, fmt::format("K(n=3, r=2) = {}", k));

    if (const auto g = c.s.root["grid"]) {
        const auto r = parse_grid(need(g, "r"));
        const auto t = parse_grid(need(g, "t"));
        const auto panel = solve_panel(P, r, t, c.o.threads);
        FrontDetection opts;
        opts.threshold = get<double>(c.s.root, "threshold", opts.threshold);
        const auto d = detect_fronts(P, panel, opts);
        for (const auto& n : d.notes) c.note(n);
        c.note(fmt::format("{} fronts detected on the panel", d.fronts.size()));
        if (const auto ex = c.s.root["expected_fronts"])
            c.at_most("front-count", std::abs(static_cast<double>(d.fronts.size()) - ex.as<double>()), 0.0,
                      fmt::format("expected {}", ex.as<int>()));
        for (std::size_t i = 0; i < d.fronts.size(); ++i) check_front(c, d.fronts[i], fmt::format("front{}", i), false);
    }
    if (const auto tr = c.s.root["track"]) {
        const auto br = req<std::vector<double>>(tr, "bracket");
        if (br.size() != 2) throw ConfigError("track.bracket must be [lo, hi]");
        const auto times = parse_grid(need(tr, "times"));
        const auto front = track_front(P, times, br[0], br[1]);
        check_front(c, front, "tracked", true);
    }
}

void compare_fd(Ctx& c)
{
    const auto P = bounded_from(c.problem());
    BoundedSolution S(P);
    oracle::FDSolverConfig cfg;
    const auto fdn = c.s.root["fd"];
    cfg.cells = fdn ? get<int>(fdn, "cells", cfg.cells) : cfg.cells;
    cfg.output_times = parse_grid(need(need(c.s.root, "grid"), "t"));
    const auto fd = oracle::fd_viscous_solve(oracle::FdProblem::from_bounded(P), cfg);
    const auto win = get<std::vector<double>>(c.s.root, "window", {0.1, 0.9});
    if (win.size() != 2) throw ConfigError("window must be [lo, hi] as fractions of the domain");
    const double a = P.r_inner(), L = P.length();
    const auto& F = fd.field;
    double worst = 0.0;
    std::ostringstream csv;
    csv << "r,t,q_series,q_fd,diff\n";
    for (std::size_t it = 0; it < F.t.size(); ++it) {
        if (F.t[it] < S.t_floor()) continue;
        for (std::size_t ir = 0; ir < F.r.size(); ++ir) {
            const double r = F.r[ir];
            if (r < a + win[0] * L || r > a + win[1] * L) continue;
            const double qs = S.velocity(r, F.t[it]).q, qf = F.q[F.index(it, ir)];
            worst = std::max(worst, std::abs(qs - qf));
            csv << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r, F.t[it], qs, qf, qs - qf);
        }
    }
    c.at_most("fd-velocity", worst, c.tol("fd-velocity", 1e-3), "L-inf |q_series - q_fd| on the window");
    for (std::size_t it = 0; it < F.t.size(); ++it)
        c.note(fmt::format("t={:.6g}: mass fd {:.10g}, series {:.10g}", F.t[it], fd.mass[it], S.mass(F.t[it]).mass));
    if (c.o.write_files) {
        auto f = c.open("compare.csv");
        f << csv.str();
    }
    c.write_field("fd_solution", F);
}

void compare_brute(Ctx& c)
{
    const auto P = inviscid_from(c.problem());
    const auto r = parse_grid(need(need(c.s.root, "grid"), "r"));
    const auto t = parse_grid(need(need(c.s.root, "grid"), "t"));
    const int density = get<int>(c.s.root, "grid_density", 2000);
    const auto bf = oracle::brute_force_panel(P, r, t, density, c.o.threads);
    std::vector<PathMinimum> pm(bf.size());
    num::parallel_for(pm.size(), c.o.threads,
                      [&](std::size_t k) { pm[k] = minimize_paths(P, r[k % r.size()], t[k / r.size()]); });
    double worst = 0.0;
    std::ostringstream csv;
    csv << "r,t,Q_min,Q_brute,diff,branch\n";
    for (std::size_t k = 0; k < bf.size(); ++k) {
        worst = std::max(worst, std::abs(pm[k].value - bf[k].value));
        csv << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", r[k % r.size()], t[k / r.size()],
                           pm[k].value, bf[k].value, pm[k].value - bf[k].value,
                           pm[k].branch == Branch::Interior ? 'I' : 'B');
    }
    c.at_most("path-minimum", worst, c.tol("path-minimum", 1e-4),
              fmt::format("max |Q - Q_brute|, grid density {}", density));
    if (c.o.write_files) {
        auto f = c.open("compare.csv");
        f << csv.str();
    }
}

void compare_sticky(Ctx& c)
{
    const auto P = inviscid_from(c.problem());
    const auto pn = need(c.s.root, "particles");
    const auto ps = oracle::particles_from_profile(P.q0, P.p0, get<double>(pn, "from", 0.0),
                                                   get<double>(pn, "to", P.p0.support_end()), req<int>(pn, "count"));
    const auto tr = need(c.s.root, "track");
    const auto br = req<std::vector<double>>(tr, "bracket");
    if (br.size() != 2) throw ConfigError("track.bracket must be [lo, hi]");
    const auto times = parse_grid(need(tr, "times"));
    const auto front = track_front(P, times, br[0], br[1]);
    oracle::StickyOptions so;
    so.omega = P.omega;
    if (P.boundary_credit(times.back()) > 0.0) {
        so.q_B = P.q_B;
        so.p_B = P.p_B;
    }
    const auto run = oracle::sticky_particle_run(ps, times, so);
    double gap = 0.0, mass_gap = 0.0;
    std::ostringstream csv;
    csv << "t,r_cluster,s_front,m_cluster,e_front\n";
    for (std::size_t i = 0; i < run.size(); ++i) {
        const auto h = oracle::heaviest(run[i]);
        if (times[i] > 0.0) {
            gap = std::max(gap, std::abs(h.r - front.s[i]));
            mass_gap = std::max(mass_gap, std::abs(h.m - front.e[i]));
        }
        csv << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", times[i], h.r, front.s[i], h.m, front.e[i]);
    }
    c.at_most("sticky-trajectory", gap, c.tol("sticky-trajectory", 2e-2),
              fmt::format("L-inf |cluster - front|, {} particles", ps.size()));
    c.note(fmt::format("max |cluster mass - e(t)| = {:.3e}", mass_gap));
    if (c.o.write_files) {
        auto f = c.open("cluster.csv");
        f << csv.str();
        auto pf = c.open("particles.csv");
        oracle::write_particle_csv(pf, run);
    }
}

void compare_viscosity(Ctx& c)
{
    const auto p = c.problem();
    const int n = req<int>(p, "n");
    const auto q0 = parse_profile(need(p, "q0"));
    const auto rho0 = parse_profile(need(p, "rho0"));
    const auto eps = req<std::vector<double>>(c.s.root, "epsilons");
    const double t = req<double>(c.s.root, "time");
    const auto pts = parse_grid(need(c.s.root, "points"));
    if (eps.size() < 2) throw ConfigError("need at least two epsilons");
    // The inviscid velocity does not involve the density; any compactly supported p0 will do.
    const auto inv = InviscidProblem::make(n, q0, ScalarProfile::constant(0.0), ScalarProfile::constant(0.0),
                                           ScalarProfile::constant(0.0));
    std::vector<double> q_inv(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto s = solution(inv, pts[i], t);
        if (s.discontinuity) throw DataError(fmt::format("r={} is a discontinuity point at t={}", pts[i], t));
        q_inv[i] = s.q;
    }
    // The reference must actually carry a shock at this time.
    std::vector<double> scan(400);
    const double r_max = 2.0 * (*std::max_element(pts.begin(), pts.end()) + 1.0);
    for (std::size_t i = 0; i < scan.size(); ++i) scan[i] = r_max * (i + 1) / scan.size();
    const auto found = detect_fronts(inv, solve_panel(inv, scan, {t}, c.o.threads));
    const double shock_at = found.fronts.empty() ? -1.0 : found.fronts.front().s.front();
    c.at_least("sweep-shocked", shock_at, 0.0, "location of a discontinuity in the inviscid reference");
    std::vector<std::vector<double>> err(eps.size(), std::vector<double>(pts.size()));
    std::ostringstream csv;
    csv << "r,epsilon,q_eps,q_inviscid,err\n";
    for (std::size_t k = 0; k < eps.size(); ++k) {
        const auto P = FreespaceProblem::radial(n, eps[k], q0, rho0);
        std::vector<double> q(pts.size());
        num::parallel_for(pts.size(), c.o.threads, [&](std::size_t i) { q[i] = radial_velocity(P, pts[i], t).q; });
        for (std::size_t i = 0; i < pts.size(); ++i) {
            err[k][i] = std::abs(q[i] - q_inv[i]);
            csv << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", pts[i], eps[k], q[i], q_inv[i], err[k][i]);
        }
    }
    int rises = 0;
    for (std::size_t k = 0; k + 1 < eps.size(); ++k)
        for (std::size_t i = 0; i < pts.size(); ++i) rises += err[k + 1][i] >= err[k][i];
    c.at_most("sweep-monotone", rises, 0.0, fmt::format("pointwise increases over {} points", pts.size()));
    double order = kInf;
    for (std::size_t k = 0; k + 1 < eps.size(); ++k) {
        const double a = *std::max_element(err[k].begin(), err[k].end());
        const double b = *std::max_element(err[k + 1].begin(), err[k + 1].end());
        order = std::min(order, std::log(a / b) / std::log(eps[k] / eps[k + 1]));
    }
    c.at_least("sweep-order", order, c.tol("sweep-order", 0.8), "smallest empirical order of max |q_eps - q|");
    if (c.o.write_files) {
        auto f = c.open("sweep.csv");
        f << csv.str();
    }
}

void run_oracle_compare(Ctx& c)
{
    const auto which = req<std::string>(c.s.root, "oracle");
    if (which == "fd") compare_fd(c);
    else if (which == "brute-force") compare_brute(c);
    else if (which == "sticky") compare_sticky(c);
    else if (which == "viscosity-sweep") compare_viscosity(c);
    else throw ConfigError(fmt::format("unknown oracle '{}'", which));
}

void run_eigen(Ctx& c)
{
    const auto p = c.problem();
    const auto kind = green_case_from_string(req<std::string>(p, "kind"));
    const double eps = req<double>(p, "epsilon");
    const auto ep = is_ball(kind)
                        ? EigenProblem::ball(kind, req<double>(p, "R"), get<double>(p, "q_B", 0.0), eps)
                        : EigenProblem::annulus(kind, req<double>(p, "R1"), req<double>(p, "R2"),
                                                get<double>(p, "q1", 0.0), get<double>(p, "q2", 0.0), eps);
    const int count = get<int>(c.s.root, "count", 5);
    const auto list = find_eigenvalues(ep, count);
    if (c.o.write_files) {
        auto f = c.open("eigen.csv");
        write_eigen_csv(f, list);
    }
    c.at_most("eigen-residual", max_abs(list.residuals), c.tol("eigen-residual", 1e-10), "max characteristic residual");
    ScanOptions half;
    half.step = ep.root_spacing() / 80.0;
    const auto fine = find_eigenvalues(ep, count, half);
    double shift = 0.0;
    for (int i = 0; i < count; ++i) shift = std::max(shift, std::abs(fine.values[i] - list.values[i]));
    c.at_most("eigen-scan-halving", shift, c.tol("eigen-scan-halving", 1e-10), "max root change with half the scan step");
    const auto growing = find_growing_modes(ep);
    if (!growing.empty()) c.note(fmt::format("{} growing mode(s) besides the listed roots", growing.size()));
    if (ep.has_zero_mode()) c.note("sigma = 0 is also an eigenvalue");
}

}  // namespace

RunReport run_scenario(const Scenario& s, const RunOptions& o)
{
    RunReport rep;
    rep.scenario = s.name;
    const auto start = std::chrono::steady_clock::now();
    Ctx c{s, o, rep, o.out_dir / s.name};
    if (o.write_files) fs::create_directories(c.dir);
    try {
        switch (s.mode) {
        case ScenarioMode::Freespace: run_freespace(c); break;
        case ScenarioMode::Ball:
        case ScenarioMode::Annulus: run_bounded(c); break;
        case ScenarioMode::Inviscid: run_inviscid(c); break;
        case ScenarioMode::VerifyRh: run_verify_rh(c); break;
        case ScenarioMode::OracleCompare: run_oracle_compare(c); break;
        case ScenarioMode::Eigen: run_eigen(c); break;
        }
    } catch (const YAML::Exception& e) {
        throw ConfigError(fmt::format("{}: {}", s.name, e.what()));
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.write_files) {
        auto f = c.open("report.txt");
        f << format_report(s, rep);
    }
    return rep;
}

std::string format_report(const Scenario& s, const RunReport& r)
{
    std::ostringstream os;
    os << "scenario: " << s.name << "\n";
    os << "mode: " << to_string(s.mode) << "\n";
    if (!s.description.empty()) os << "description: " << s.description << "\n";
    os << "\nparameters:\n";
    YAML::Emitter em;
    em << s.root;
    std::istringstream lines(em.c_str());
    for (std::string line; std::getline(lines, line);) os << "  " << line << "\n";
    if (!r.notes.empty()) {
        os << "\nnotes:\n";
        for (const auto& n : r.notes) os << "  - " << n << "\n";
    }
    os << "\nchecks:\n";
    for (const auto& c : r.checks)
        os << fmt::format("  {:<4} {:<28} value={:<12.4e} limit={:<12.4e} {}\n", c.pass ? "PASS" : "FAIL", c.name,
                          c.value, c.limit, c.detail);
    os << fmt::format("\nresult: {} ({:.2f} s)\n", r.ok() ? "PASS" : "FAIL", r.seconds);
    return os.str();
}

}  // namespace zpgd
