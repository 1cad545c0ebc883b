#include "zpgd/radial_core.hpp"

#include "zpgd/errors.hpp"
#include "zpgd/numerics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace zpgd {

namespace {

void check_grid(const std::vector<double>& g, const char* what, bool positive)
{
    if (g.empty()) throw DataError(fmt::format("radial field: empty {} grid", what));
    for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1])) throw DataError(fmt::format("radial field: {} grid must increase strictly", what));
    if (positive && !(g.front() > 0.0)) throw DataError("radial field: radii must be positive");
    if (!positive && g.front() < 0.0) throw DataError("radial field: times must be nonnegative");
}

// Precomputed derivative weights at every node of a grid.
struct StencilTable {
    std::vector<std::size_t> start;
    std::vector<std::vector<double>> d1, d2;
    int width = 0;

    StencilTable(std::span<const double> x, int w) : width(std::min<int>(w, static_cast<int>(x.size())))
    {
        const std::size_t n = x.size();
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t s = i >= static_cast<std::size_t>(width / 2) ? i - width / 2 : 0;
            if (s + width > n) s = n - width;
            const auto c = num::fornberg_weights(x[i], x.subspan(s, width), 2);
            start.push_back(s);
            d1.push_back(c[1]);
            d2.push_back(c[2]);
        }
    }

    template <class Get>
    double first(std::size_t i, Get&& f) const
    {
        double v = 0.0;
        for (int j = 0; j < width; ++j) v += d1[i][j] * f(start[i] + j);
        return v;
    }
    template <class Get>
    double second(std::size_t i, Get&& f) const
    {
        double v = 0.0;
        for (int j = 0; j < width; ++j) v += d2[i][j] * f(start[i] + j);
        return v;
    }
};

// Cell [i, i+1] containing v, clamped to the grid.
std::size_t bracket(const std::vector<double>& g, double v)
{
    if (g.size() < 2) return 0;
    auto it = std::upper_bound(g.begin(), g.end(), v);
    std::size_t i = it == g.begin() ? 0 : static_cast<std::size_t>(it - g.begin()) - 1;
    return std::min(i, g.size() - 2);
}

}  // namespace

double RadialField::rho(std::size_t it, std::size_t ir) const
{
    return p[index(it, ir)] / std::pow(r[ir], n - 1);
}

void RadialField::validate() const
{
    if (n < 1 || n > 3) throw DataError("radial field: dimension must be 1, 2 or 3");
    if (epsilon < 0.0) throw DataError("radial field: epsilon must be >= 0");
    check_grid(r, "r", true);
    check_grid(t, "t", false);
    const std::size_t N = r.size() * t.size();
    if (q.size() != N || p.size() != N) throw DataError("radial field: sample count does not match grid");
    if (!flags.empty() && flags.size() != N) throw DataError("radial field: flag count does not match grid");
    for (std::size_t i = 0; i < N; ++i) {
        if (!std::isfinite(q[i])) throw DataError("radial field: q must be finite");
        const bool flagged = !flags.empty() && flags[i];
        if (!flagged && !std::isfinite(p[i])) throw DataError("radial field: p must be finite off flagged samples");
    }
}

LiftedSample lift_to_vector(const RadialField& field, std::span<const double> x, double t)
{
    if (static_cast<int>(x.size()) != field.n) throw DataError("lift_to_vector: point dimension mismatch");
    double rr = 0.0;
    for (double v : x) rr += v * v;
    rr = std::sqrt(rr);
    if (rr == 0.0) throw DomainError("lift_to_vector: direction undefined at the origin");
    if (rr < field.r.front() || rr > field.r.back() || t < field.t.front() || t > field.t.back())
        throw DomainError("lift_to_vector: point outside the sampled grid");

    const std::size_t ir = bracket(field.r, rr), it = bracket(field.t, t);
    const double wr = field.r.size() > 1 ? (rr - field.r[ir]) / (field.r[ir + 1] - field.r[ir]) : 0.0;
    const double wt = field.t.size() > 1 ? (t - field.t[it]) / (field.t[it + 1] - field.t[it]) : 0.0;
    const std::size_t ir1 = std::min(ir + 1, field.r.size() - 1), it1 = std::min(it + 1, field.t.size() - 1);
    const auto interp = [&](const std::vector<double>& v) {
        const double a = v[field.index(it, ir)] * (1 - wr) + v[field.index(it, ir1)] * wr;
        const double b = v[field.index(it1, ir)] * (1 - wr) + v[field.index(it1, ir1)] * wr;
        return a * (1 - wt) + b * wt;
    };
    const double qv = interp(field.q), pv = interp(field.p);
    LiftedSample s;
    for (double xi : x) s.u.push_back(xi / rr * qv);
    s.rho = pv / std::pow(rr, field.n - 1);
    return s;
}

std::vector<double> velocity_from_hopf_cole(const HopfColeState& s, double epsilon)
{
    const std::size_t nr = s.r.size(), nt = s.t.size();
    if (s.a.size() != nr * nt) throw DataError("hopf-cole state: sample count does not match grid");
    for (double v : s.a)
        if (!(v > 0.0)) throw DataError("hopf-cole state: a must be positive everywhere");
    const StencilTable dr(s.r, 5);
    std::vector<double> q(nr * nt);
    for (std::size_t it = 0; it < nt; ++it)
        for (std::size_t ir = 0; ir < nr; ++ir) {
            const auto get = [&](std::size_t j) { return s.a[it * nr + j]; };
            q[it * nr + ir] = -epsilon * dr.first(ir, get) / s.a[it * nr + ir];
        }
    return q;
}

ViscousResidual viscous_residual(const RadialField& f)
{
    f.validate();
    const std::size_t nr = f.r.size(), nt = f.t.size();
    if (nr < 5 || nt < 5) throw DataError("viscous_residual: need at least 5 points per direction");
    const StencilTable dr(f.r, 5), dt(f.t, 3);
    const double nm1 = f.n - 1;
    ViscousResidual res{std::vector<double>(nr * nt), std::vector<double>(nr * nt)};
    for (std::size_t it = 0; it < nt; ++it)
        for (std::size_t ir = 0; ir < nr; ++ir) {
            const auto qr_ = [&](std::size_t j) { return f.q[f.index(it, j)]; };
            const auto qt_ = [&](std::size_t j) { return f.q[f.index(j, ir)]; };
            const auto pt_ = [&](std::size_t j) { return f.p[f.index(j, ir)]; };
            const auto flux = [&](std::size_t j) { return f.q[f.index(it, j)] * f.p[f.index(it, j)]; };
            const double r = f.r[ir], q = f.q[f.index(it, ir)];
            const double q_r = dr.first(ir, qr_), q_rr = dr.second(ir, qr_), q_t = dt.first(it, qt_);
            res.res_q[f.index(it, ir)] = q_t + q * q_r - 0.5 * f.epsilon * (q_rr + nm1 / r * q_r - nm1 / (r * r) * q);
            res.res_p[f.index(it, ir)] = dt.first(it, pt_) + dr.first(ir, flux);
        }
    return res;
}

std::vector<double> heat_residual(const HopfColeState& s, double epsilon, int n)
{
    const std::size_t nr = s.r.size(), nt = s.t.size();
    if (s.a.size() != nr * nt) throw DataError("hopf-cole state: sample count does not match grid");
    if (nr < 5 || nt < 5) throw DataError("heat_residual: need at least 5 points per direction");
    const StencilTable dr(s.r, 5), dt(s.t, 3);
    std::vector<double> res(nr * nt);
    for (std::size_t it = 0; it < nt; ++it)
        for (std::size_t ir = 0; ir < nr; ++ir) {
            const auto ar = [&](std::size_t j) { return s.a[it * nr + j]; };
            const auto at = [&](std::size_t j) { return s.a[j * nr + ir]; };
            const double a_r = dr.first(ir, ar), a_rr = dr.second(ir, ar);
            res[it * nr + ir] = dt.first(it, at) - 0.5 * epsilon * (a_rr + (n - 1) / s.r[ir] * a_r);
        }
    return res;
}

CartesianResidual cartesian_residual(const RadialFunction& f, int n, double epsilon, std::span<const double> x0,
                                     double t, double h)
{
    const std::size_t d = static_cast<std::size_t>(n);
    if (x0.size() != d) throw DataError("cartesian_residual: point dimension mismatch");
    struct Lifted {
        std::vector<double> u;
        double rho;
    };
    const auto eval = [&](std::vector<double> x, double tt) {
        double rr = 0.0;
        for (double v : x) rr += v * v;
        rr = std::sqrt(rr);
        const auto [q, p] = f(rr, tt);
        Lifted l{std::vector<double>(d), p / std::pow(rr, n - 1)};
        for (std::size_t j = 0; j < d; ++j) l.u[j] = x[j] / rr * q;
        return l;
    };
    const std::vector<double> x(x0.begin(), x0.end());
    const Lifted c = eval(x, t);
    const Lifted tp = eval(x, t + h), tm = eval(x, t - h);

    CartesianResidual res;
    res.momentum.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) res.momentum[j] = (tp.u[j] - tm.u[j]) / (2 * h);
    res.continuity = (tp.rho - tm.rho) / (2 * h);
    for (std::size_t k = 0; k < d; ++k) {
        auto xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        const Lifted P = eval(xp, t), M = eval(xm, t);
        for (std::size_t j = 0; j < d; ++j) {
            const double du = (P.u[j] - M.u[j]) / (2 * h);
            const double d2u = (P.u[j] - 2 * c.u[j] + M.u[j]) / (h * h);
            res.momentum[j] += c.u[k] * du - 0.5 * epsilon * d2u;
        }
        res.continuity += (P.rho * P.u[k] - M.rho * M.u[k]) / (2 * h);
    }
    return res;
}

void write_csv(std::ostream& os, const RadialField& f)
{
    const bool with_branch = !f.branch.empty(), with_flags = !f.flags.empty();
    os << fmt::format("# n={} epsilon={:.17g}\n", f.n, f.epsilon);
    os << "r,t,q,p,rho" << (with_branch ? ",branch" : "") << (with_flags ? ",flag" : "") << '\n';
    for (std::size_t it = 0; it < f.t.size(); ++it)
        for (std::size_t ir = 0; ir < f.r.size(); ++ir) {
            const auto i = f.index(it, ir);
            os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}", f.r[ir], f.t[it], f.q[i], f.p[i],
                              f.rho(it, ir));
            if (with_branch) os << ',' << f.branch[i];
            if (with_flags) os << ',' << (f.flags[i] ? 1 : 0);
            os << '\n';
        }
}

void write_csv(const std::string& path, const RadialField& f)
{
    std::ofstream os(path);
    if (!os) throw DataError(fmt::format("cannot open '{}' for writing", path));
    write_csv(os, f);
}

RadialField read_csv(std::istream& is)
{
    RadialField f;
    std::string line;
    if (!std::getline(is, line) || std::sscanf(line.c_str(), "# n=%d epsilon=%lf", &f.n, &f.epsilon) != 2)
        throw DataError("radial csv: missing '# n=.. epsilon=..' header");
    if (!std::getline(is, line)) throw DataError("radial csv: missing column header");
    const bool with_branch = line.find("branch") != std::string::npos;
    const bool with_flags = line.find("flag") != std::string::npos;

    std::vector<double> rs, ts;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 5) throw DataError("radial csv: short row");
        const double r = std::stod(cells[0]), t = std::stod(cells[1]);
        if (ts.empty() || t != ts.back()) ts.push_back(t);
        if (ts.size() == 1) rs.push_back(r);
        f.q.push_back(std::stod(cells[2]));
        f.p.push_back(std::stod(cells[3]));
        std::size_t c = 5;
        if (with_branch) f.branch.push_back(cells.at(c++).at(0));
        if (with_flags) f.flags.push_back(static_cast<char>(std::stoi(cells.at(c++))));
    }
    f.r = std::move(rs);
    f.t = std::move(ts);
    f.validate();
    return f;
}

}  // namespace zpgd
