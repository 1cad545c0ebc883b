#include "zpgd/inviscid.hpp"

#include "zpgd/errors.hpp"
#include "zpgd/numerics.hpp"

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace zpgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGapValue = 1e-9;  // value gap below which two minimizers count as tied
constexpr double kGapVelocity = 1e-4;

struct Candidate {
    double x = 0.0, v = kInf;
};

/**
 * Local minima of f on [a, b] from a sampled scan (plus the given extra
 * points), each refined by Brent's method and then, when df brackets a sign
 * change, polished by bisection on df. Sorted by value.
 */
template <class F, class DF>
std::vector<Candidate> minimize_1d(F&& f, DF&& df, double a, double b, int samples, const std::vector<double>& extra,
                                   std::size_t keep = 6)
{
    std::vector<double> xs;
    xs.reserve(samples + 1 + extra.size());
    for (int i = 0; i <= samples; ++i) xs.push_back(a + (b - a) * i / samples);
    for (double e : extra)
        if (e > a && e < b) xs.push_back(e);
    std::sort(xs.begin(), xs.end());
    std::vector<double> vs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) vs[i] = f(xs[i]);

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const bool left_ok = i == 0 || vs[i] <= vs[i - 1];
        const bool right_ok = i + 1 == xs.size() || vs[i] <= vs[i + 1];
        if (left_ok && right_ok) idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return vs[i] < vs[j]; });
    if (idx.size() > keep) idx.resize(keep);

    std::vector<Candidate> out;
    for (std::size_t i : idx) {
        Candidate c{xs[i], vs[i]};
        const double lo = xs[i == 0 ? 0 : i - 1], hi = xs[std::min(i + 1, xs.size() - 1)];
        if (hi > lo) {
            const auto [bx, bv] = boost::math::tools::brent_find_minima(f, lo, hi, std::numeric_limits<double>::digits);
            if (bv < c.v) c = {bx, bv};
            const double dlo = df(lo), dhi = df(hi);
            if (dlo < 0.0 && dhi > 0.0) {
                const double px = num::bisect([&](double x) { return df(x); }, lo, hi);
                const double pv = f(px);
                if (pv <= c.v + 1e-15 * (1.0 + std::abs(c.v))) c = {px, pv};
            }
        }
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const Candidate& p, const Candidate& q) {
        return p.v < q.v || (p.v == q.v && p.x < q.x);
    });
    return out;
}

bool value_tie(double a, double b, double scale = 1e-12) { return std::abs(a - b) <= scale * (1.0 + std::abs(a)); }

std::vector<double> breaks_in(const ScalarProfile& f, double a, double b)
{
    std::vector<double> out;
    for (double x : f.breaks())
        if (x > a && x < b) out.push_back(x);
    return out;
}

double positive(double x) { return x > 0.0 ? x : 0.0; }

// Scan window for r0: the minimizer cannot lie beyond r + t sup(q0^-).
double r0_window(const InviscidProblem& p, double r, double t)
{
    double s = p.q0.sup_abs();
    if (!std::isfinite(s)) s = p.q0.sup_abs(0.0, 2.0 * r + 10.0);
    double qb = p.q_B.sup_abs(0.0, t);
    return r + t * (s + qb) + 1e-9 * (1.0 + r);
}

/// Interior (Hopf-Lax) candidates: minimizers of int_0^r0 q0 + (r - r0)^2 / (2t).
std::vector<Candidate> interior_candidates(const InviscidProblem& p, double r, double t, int samples,
                                           std::size_t keep = 6)
{
    const auto f = [&](double r0) { return p.potential(r0) + interior_cost(r, r0, t); };
    const auto df = [&](double r0) { return p.q0(r0) - (r - r0) / t; };
    double b = r0_window(p, r, t);
    for (int grow = 0; grow < 30; ++grow) {
        auto c = minimize_1d(f, df, 0.0, b, samples, breaks_in(p.q0, 0.0, b), keep);
        if (c.front().x < b * (1.0 - 2.0 / samples)) return c;
        b *= 2.0;
    }
    throw NumericalError(fmt::format("minimize_paths: no interior minimizer found at r = {}, t = {}", r, t));
}

/// min over r0 of int_0^r0 q0 + r0^2 / (2 t1): the cost of reaching the origin at time t1.
Candidate origin_arrival(const InviscidProblem& p, double t1, int samples)
{
    if (t1 <= 0.0) return {0.0, 0.0};
    return interior_candidates(p, 0.0, t1, samples, 2).front();
}

struct BoundaryMin {
    double r0 = 0.0, t1 = 0.0, t2 = 0.0, value = kInf;
};

BoundaryMin boundary_minimum(const InviscidProblem& p, double r, double t)
{
    const int seeds = 128, inner_samples = 128;
    const auto arrive = [&](double t1) { return origin_arrival(p, t1, inner_samples).v + p.boundary_credit(t1); };
    const auto leave = [&](double t2) { return r * r / (2.0 * (t - t2)) - p.boundary_credit(t2); };

    std::vector<double> ts;
    for (int i = 0; i < seeds; ++i) ts.push_back(t * i / seeds);
    for (double x : breaks_in(p.q_B, 0.0, t)) ts.push_back(x);
    std::sort(ts.begin(), ts.end());
    const std::size_t m = ts.size();
    std::vector<double> ga(m), gl(m);
    for (std::size_t i = 0; i < m; ++i) {
        ga[i] = arrive(ts[i]);
        gl[i] = leave(ts[i]);
    }
    // Best t1 <= t2 on the seed grid.
    std::size_t bi = 0, bj = 0, pi = 0;
    double best = kInf;
    for (std::size_t j = 0; j < m; ++j) {
        if (ga[j] < ga[pi]) pi = j;
        if (ga[pi] + gl[j] < best) {
            best = ga[pi] + gl[j];
            bi = pi;
            bj = j;
        }
    }

    // Refine t2, then t1, a few rounds of coordinate descent.
    double t1 = ts[bi], t2 = ts[bj];
    const double t2_hi_cap = t * (1.0 - 1e-14);
    for (int round = 0; round < 3; ++round) {
        const double lo2 = std::max(t1, bj > 0 ? ts[bj - 1] : 0.0);
        const double hi2 = bj + 1 < m ? ts[bj + 1] : t2_hi_cap;
        if (hi2 > lo2) {
            const auto c = minimize_1d(leave, [&](double s) {
                const double qb = positive(p.q_B(s));
                return r * r / (2.0 * (t - s) * (t - s)) - 0.5 * qb * qb;
            }, lo2, hi2, 16, {}, 1);
            if (c.front().v <= leave(t2)) t2 = c.front().x;
        }
        const double lo1 = bi > 0 ? ts[bi - 1] : 0.0;
        const double hi1 = std::min(t2, bi + 1 < m ? ts[bi + 1] : t2);
        if (hi1 > lo1) {
            const auto da = [&](double s) {
                if (s <= 0.0) return -kInf;
                const double r0 = origin_arrival(p, s, inner_samples).x, qb = positive(p.q_B(s));
                return -r0 * r0 / (2.0 * s * s) + 0.5 * qb * qb;
            };
            const auto c = minimize_1d(arrive, da, lo1, hi1, 16, {}, 1);
            if (c.front().v <= arrive(t1)) t1 = c.front().x;
        }
    }
    BoundaryMin out;
    out.t1 = t1;
    out.t2 = t2;
    out.r0 = origin_arrival(p, t1, inner_samples).x;
    out.value = boundary_cost(r, out.r0, t, t1, t2, p.q_B) + p.potential(out.r0);
    if (!(t2 > t1)) out.value = kInf;
    return out;
}

}  // namespace

InviscidProblem InviscidProblem::make(int n, ScalarProfile q0, ScalarProfile p0, ScalarProfile q_B, ScalarProfile p_B)
{
    InviscidProblem p;
    p.n = n;
    p.q0 = std::move(q0);
    p.p0 = std::move(p0);
    p.q_B = std::move(q_B);
    p.p_B = std::move(p_B);
    p.omega = n == 1 ? 1.0 : num::sphere_measure(n);
    p.validate();
    return p;
}

void InviscidProblem::validate() const
{
    if (n < 1 || n > 3) throw DataError("inviscid problem: dimension must be 1, 2 or 3");
    if (!std::isfinite(p0.support_end())) throw DataError("inviscid problem: p0 must have compact support");
    if (!(omega > 0.0)) throw DataError("inviscid problem: omega must be positive");
}

double InviscidProblem::boundary_credit(double s) const { return 0.5 * q_B.positive_part_square_integral(0.0, s); }

double interior_cost(double r, double r0, double t)
{
    if (!(t > 0.0)) throw DomainError(fmt::format("interior_cost: t must be positive (got {})", t));
    const double d = r - r0;
    return d * d / (2.0 * t);
}

double boundary_cost(double r, double r0, double t, double t1, double t2, const ScalarProfile& q_B)
{
    if (!(t > 0.0)) throw DomainError(fmt::format("boundary_cost: t must be positive (got {})", t));
    if (t1 < 0.0 || t2 < t1 || t2 >= t) return kInf;
    double start;
    if (t1 == 0.0) {
        if (r0 > 0.0) return kInf;
        start = 0.0;
    } else {
        start = r0 * r0 / (2.0 * t1);
    }
    const double credit = 0.5 * q_B.positive_part_square_integral(t1, t2);
    return start - credit + r * r / (2.0 * (t - t2));
}

double path_velocity(const PathMinimum& m, double r, double t)
{
    return m.branch == Branch::Interior ? (r - m.r0) / t : r / (t - m.t2);
}

double cumulative_mass(const InviscidProblem& p, const PathMinimum& m)
{
    if (m.branch == Branch::Boundary) return -p.p_B(m.t2) / p.omega;
    const double end = p.p0.support_end();
    return m.r0 >= end ? 0.0 : -p.p0.integral(m.r0, end);
}

PathMinimum minimize_paths(const InviscidProblem& p, double r, double t)
{
    if (!(t > 0.0)) throw DomainError(fmt::format("minimize_paths: t must be positive (got {})", t));
    if (r < 0.0) throw DomainError("minimize_paths: r must be >= 0");

    struct Option {
        PathMinimum m;
        double q;
    };
    std::vector<Option> options;
    for (const auto& c : interior_candidates(p, r, t, 1024)) {
        PathMinimum m;
        m.branch = Branch::Interior;
        m.r0 = c.x;
        m.value = c.v;
        options.push_back({m, path_velocity(m, r, t)});
    }
    // The boundary branch needs a positive credit; without any q_B^+ on [0, t) it cannot win.
    if (p.boundary_credit(t) > 0.0) {
        const auto b = boundary_minimum(p, r, t);
        if (std::isfinite(b.value)) {
            PathMinimum m;
            m.branch = Branch::Boundary;
            m.r0 = b.r0;
            m.t1 = b.t1;
            m.t2 = b.t2;
            m.value = b.value;
            options.push_back({m, path_velocity(m, r, t)});
        }
    }

    double vmin = kInf;
    for (const auto& o : options) vmin = std::min(vmin, o.m.value);
    // Among ties prefer Interior, then smaller r0.
    const Option* best = nullptr;
    for (const auto& o : options) {
        if (!value_tie(o.m.value, vmin)) continue;
        if (!best) {
            best = &o;
            continue;
        }
        const bool better_branch = o.m.branch == Branch::Interior && best->m.branch == Branch::Boundary;
        const bool same_branch = o.m.branch == best->m.branch;
        if (better_branch || (same_branch && (o.m.r0 < best->m.r0 || (o.m.r0 == best->m.r0 && o.m.t2 < best->m.t2))))
            best = &o;
    }
    PathMinimum out = best->m;
    for (const auto& o : options)
        if (std::abs(o.m.value - out.value) < kGapValue && std::abs(o.q - best->q) > kGapVelocity)
            out.discontinuity = true;
    return out;
}

InviscidSample solution(const InviscidProblem& p, double r, double t)
{
    if (!(r > 0.0)) throw DomainError("inviscid solution: r must be positive");
    const auto m = minimize_paths(p, r, t);
    InviscidSample s;
    s.branch = m.branch;
    s.q = path_velocity(m, r, t);
    s.P = cumulative_mass(p, m);
    s.discontinuity = m.discontinuity;

    const auto at = [&](double x) {
        const auto mm = minimize_paths(p, x, t);
        return std::pair{cumulative_mass(p, mm), mm};
    };
    if (m.discontinuity) {
        const double d = 1e-7 * std::max(r, 1.0);
        const auto [Pm, mm] = at(r - d);
        const auto [Pp, mp] = at(r + d);
        s.q_minus = path_velocity(mm, r - d, t);
        s.q_plus = path_velocity(mp, r + d, t);
        s.P_minus = Pm;
        s.P_plus = Pp;
    }

    // p = dP/dr, one-sided second-order differences on the smoother side.
    const double h = 1e-5 * std::max(r, 1e-2);
    std::optional<double> right, left;
    double curv_r = kInf, curv_l = kInf;
    {
        const auto [P1, m1] = at(r + h);
        const auto [P2, m2] = at(r + 2 * h);
        if (m1.branch == m.branch && m2.branch == m.branch && !m1.discontinuity && !m2.discontinuity) {
            right = (-3.0 * s.P + 4.0 * P1 - P2) / (2.0 * h);
            curv_r = std::abs(s.P - 2.0 * P1 + P2);
        }
    }
    if (r > 2.5 * h) {
        const auto [P1, m1] = at(r - h);
        const auto [P2, m2] = at(r - 2 * h);
        if (m1.branch == m.branch && m2.branch == m.branch && !m1.discontinuity && !m2.discontinuity) {
            left = (3.0 * s.P - 4.0 * P1 + P2) / (2.0 * h);
            curv_l = std::abs(s.P - 2.0 * P1 + P2);
        }
    }
    if (right && (!left || curv_r <= curv_l)) s.p = *right;
    else if (left) s.p = *left;
    else s.p = std::numeric_limits<double>::quiet_NaN();
    s.rho = s.p / std::pow(r, p.n - 1);
    return s;
}

RadialField solve_panel(const InviscidProblem& p, const std::vector<double>& r, const std::vector<double>& t,
                        int threads)
{
    RadialField f;
    f.n = p.n;
    f.epsilon = 0.0;
    f.r = r;
    f.t = t;
    const std::size_t N = r.size() * t.size();
    f.q.assign(N, 0.0);
    f.p.assign(N, 0.0);
    f.branch.assign(N, 'I');
    f.flags.assign(N, 0);
    num::parallel_for(N, threads, [&](std::size_t idx) {
        const std::size_t it = idx / r.size(), ir = idx % r.size();
        if (t[it] == 0.0) {
            f.q[idx] = p.q0(r[ir]);
            f.p[idx] = p.p0(r[ir]);
            return;
        }
        const auto s = solution(p, r[ir], t[it]);
        f.q[idx] = s.q;
        f.p[idx] = s.p;
        f.branch[idx] = s.branch == Branch::Interior ? 'I' : 'B';
        f.flags[idx] = (s.discontinuity || !std::isfinite(s.p)) ? 1 : 0;
    });
    f.validate();
    return f;
}

std::vector<OriginSample> sample_origin(const InviscidProblem& p, const std::vector<double>& times, double r_probe)
{
    std::vector<OriginSample> out;
    for (double t : times) {
        const auto m = minimize_paths(p, r_probe, t);
        out.push_back({t, path_velocity(m, r_probe, t), -p.omega * cumulative_mass(p, m)});
    }
    return out;
}

WeakBoundaryReport weak_boundary_check(const InviscidProblem& p, const std::vector<OriginSample>& samples,
                                       double q_tol, double mass_tol)
{
    WeakBoundaryReport rep;
    for (const auto& s : samples) {
        ++rep.checked;
        const double qb = p.q_B(s.t), qbp = positive(qb);
        const bool matches = std::abs(s.q - qb) <= q_tol * (1.0 + std::abs(qb));
        const bool absorbing = s.q <= q_tol && s.q * s.q + q_tol >= qbp * qbp;
        if (!matches && !absorbing)
            rep.violations.push_back(fmt::format("t={:.6g}: q(0+)={:.6g} neither equals q_B={:.6g} nor satisfies "
                                                 "q<=0, q^2>=(q_B+)^2",
                                                 s.t, s.q, qb));
        if (s.q > q_tol) {
            const double pb = p.p_B(s.t);
            if (std::abs(s.mass - pb) > mass_tol * std::max(1.0, std::abs(pb)))
                rep.violations.push_back(fmt::format("t={:.6g}: inflow at the origin but total mass {:.6g} != p_B={:.6g}",
                                                     s.t, s.mass, pb));
        }
    }
    return rep;
}

}  // namespace zpgd
