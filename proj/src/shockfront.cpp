#include "zpgd/shockfront.hpp"

#include "zpgd/errors.hpp"
#include "zpgd/numerics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace zpgd {

namespace {

double q_at(const InviscidProblem& p, double r, double t)
{
    if (t == 0.0) return p.q0(r);
    return path_velocity(minimize_paths(p, r, t), r, t);
}

double P_at(const InviscidProblem& p, double r, double t)
{
    if (t == 0.0) {
        const double end = p.p0.support_end();
        return r >= end ? 0.0 : -p.p0.integral(r, end);
    }
    return cumulative_mass(p, minimize_paths(p, r, t));
}

// dP/dr from three points stepping away from r in direction dir (+1 or -1).
double p_one_sided(const InviscidProblem& p, double r, double t, double h, int dir)
{
    if (t == 0.0) return p.p0(r);
    const double P0 = P_at(p, r, t), P1 = P_at(p, r + dir * h, t), P2 = P_at(p, r + 2 * dir * h, t);
    return dir * (-3.0 * P0 + 4.0 * P1 - P2) / (2.0 * h);
}

struct Located {
    double s = 0.0;
    double jump = 0.0;  // q(lo) - q(hi) of the final bracket
};

// Bisection for a jump of q inside [lo, hi]: keep the half with the larger drop.
Located locate(const InviscidProblem& p, double t, double lo, double hi)
{
    double qlo = q_at(p, lo, t), qhi = q_at(p, hi, t);
    for (int k = 0; k < 200 && hi - lo > 4e-15 * std::max(1.0, hi); ++k) {
        const double mid = 0.5 * (lo + hi);
        const double qm = q_at(p, mid, t);
        if (qlo - qm >= qm - qhi) {
            hi = mid;
            qhi = qm;
        } else {
            lo = mid;
            qlo = qm;
        }
    }
    return {0.5 * (lo + hi), qlo - qhi};
}

struct Trace {
    double s, e, qm, qp, pm, pp;
};

Trace traces(const InviscidProblem& p, double s, double t, const FrontDetection& opts)
{
    const double d = opts.trace_offset * std::max(s, 1.0);
    const double h = 1e-5 * std::max(s, 1.0);
    Trace tr{};
    tr.s = s;
    const double rm = std::max(s - d, 0.5 * s);
    tr.qm = q_at(p, rm, t);
    tr.qp = q_at(p, s + d, t);
    tr.pm = rm > 2.5 * h ? p_one_sided(p, rm, t, h, -1) : p_one_sided(p, rm, t, h, +1);
    tr.pp = p_one_sided(p, s + d, t, h, +1);
    // Remove the absolutely continuous mass picked up between the two trace points.
    tr.e = std::max(0.0, P_at(p, s + d, t) - P_at(p, rm, t) - (s - rm) * tr.pm - d * tr.pp);
    return tr;
}

void push(ShockFront& f, double t, const Trace& tr)
{
    f.times.push_back(t);
    f.s.push_back(tr.s);
    f.e.push_back(tr.e);
    f.q_minus.push_back(tr.qm);
    f.q_plus.push_back(tr.qp);
    f.p_minus.push_back(tr.pm);
    f.p_plus.push_back(tr.pp);
}

// Central differences on a possibly nonuniform time grid; one-sided at the ends.
std::vector<double> time_derivative(const std::vector<double>& t, const std::vector<double>& f)
{
    std::vector<double> d(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) d[i] = num::stencil_derivative(t, f, i, 1, 3);
    return d;
}

}  // namespace

DetectedFronts detect_fronts(const InviscidProblem& problem, const RadialField& panel, const FrontDetection& opts)
{
    const std::size_t nr = panel.r.size(), nt = panel.t.size();
    DetectedFronts out;
    if (nr < 2 || nt == 0) return out;

    std::vector<std::vector<Trace>> slices(nt);
    num::parallel_for(nt, num::default_threads(), [&](std::size_t it) {
        const double t = panel.t[it];
        double sup = 0.0;
        for (std::size_t ir = 0; ir < nr; ++ir) sup = std::max(sup, std::abs(panel.q[panel.index(it, ir)]));
        const double thr = opts.threshold * sup;
        if (!(thr > 0.0)) return;
        for (std::size_t ir = 0; ir + 1 < nr; ++ir) {
            const double drop = panel.q[panel.index(it, ir)] - panel.q[panel.index(it, ir + 1)];
            if (!(drop > thr)) continue;
            // Smooth compression loses its drop under bisection; a jump keeps it.
            const auto loc = locate(problem, t, panel.r[ir], panel.r[ir + 1]);
            if (loc.jump > 0.5 * thr) slices[it].push_back(traces(problem, loc.s, t, opts));
        }
    });

    double dr = 0.0, qsup = 0.0;
    for (std::size_t ir = 0; ir + 1 < nr; ++ir) dr = std::max(dr, panel.r[ir + 1] - panel.r[ir]);
    for (double q : panel.q) qsup = std::max(qsup, std::abs(q));

    struct Track {
        ShockFront f;
        bool open = true;
    };
    std::vector<Track> tracks;
    for (std::size_t it = 0; it < nt; ++it) {
        const double t = panel.t[it];
        const double dt = it == 0 ? 0.0 : t - panel.t[it - 1];
        const double reach = 2.0 * dr + 2.0 * qsup * dt;

        std::vector<int> owner(slices[it].size(), -1);
        std::vector<int> claims(slices[it].size(), 0);
        std::vector<int> target(tracks.size(), -1);
        for (std::size_t k = 0; k < tracks.size(); ++k) {
            if (!tracks[k].open) continue;
            const double last = tracks[k].f.s.back();
            double best = reach;
            for (std::size_t j = 0; j < slices[it].size(); ++j) {
                const double dist = std::abs(slices[it][j].s - last);
                if (dist <= best) {
                    best = dist;
                    target[k] = static_cast<int>(j);
                }
            }
            if (target[k] >= 0) ++claims[target[k]];
        }
        for (std::size_t k = 0; k < tracks.size(); ++k) {
            if (!tracks[k].open) continue;
            const int j = target[k];
            if (j < 0) {
                tracks[k].open = false;
                continue;
            }
            if (claims[j] > 1) {
                tracks[k].open = false;
                owner[j] = -2;
                continue;
            }
            push(tracks[k].f, t, slices[it][j]);
            owner[j] = static_cast<int>(k);
        }
        for (std::size_t j = 0; j < slices[it].size(); ++j) {
            if (owner[j] >= 0) continue;
            if (owner[j] == -2)
                out.notes.push_back(fmt::format("t={:.6g}: {} fronts merged at r={:.6g}", t, claims[j], slices[it][j].s));
            Track tr;
            tr.f.n = problem.n;
            push(tr.f, t, slices[it][j]);
            tracks.push_back(std::move(tr));
        }
    }
    for (auto& tr : tracks) out.fronts.push_back(std::move(tr.f));
    return out;
}

ShockFront track_front(const InviscidProblem& problem, const std::vector<double>& times, double r_lo, double r_hi,
                       const FrontDetection& opts)
{
    if (times.empty()) throw DomainError("track_front: no times");
    ShockFront f;
    f.n = problem.n;
    double lo = r_lo, hi = r_hi;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (i > 0) {
            const double dt = t - times[i - 1];
            const double speed = 0.5 * (f.q_plus.back() + f.q_minus.back());
            const double guess = f.s.back() + speed * dt;
            const double w = std::max(std::abs(f.q_minus.back() - f.q_plus.back()) * dt, 1e-6 * std::max(guess, 1.0));
            lo = std::max(guess - w, 0.5 * guess);
            hi = guess + w;
        }
        const auto loc = locate(problem, t, lo, hi);
        if (!(loc.jump > 0.0))
            throw NumericalError(fmt::format("track_front: no compressive jump in [{:.6g}, {:.6g}] at t={:.6g}", lo, hi, t));
        push(f, t, traces(problem, loc.s, t, opts));
    }
    return f;
}

RhResidual1d rh_residual_1d(const ShockFront& f)
{
    RhResidual1d res;
    const std::size_t N = f.times.size();
    if (N < 3) return res;
    res.s_dot = time_derivative(f.times, f.s);
    res.e_dot = time_derivative(f.times, f.e);
    res.res_speed.resize(N);
    res.res_mass.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double sd = res.s_dot[i];
        const double jqp = jump(f.q_minus[i] * f.p_minus[i], f.q_plus[i] * f.p_plus[i]);
        const double jp = jump(f.p_minus[i], f.p_plus[i]);
        res.res_speed[i] = sd - 0.5 * (f.q_plus[i] + f.q_minus[i]);
        res.res_mass[i] = res.e_dot[i] - (jqp - jp * sd);
    }
    return res;
}

double mean_curvature(int n, double r)
{
    if (!(r > 0.0)) throw DomainError("mean_curvature: r must be positive");
    return -(n - 1) / (2.0 * r);
}

double mean_curvature_fd(int n, double r, double h)
{
    if (!(r > 0.0)) throw DomainError("mean_curvature_fd: r must be positive");
    // div(x/|x|) at x = r e_1, one coordinate at a time.
    double div = 0.0;
    for (int i = 0; i < n; ++i) {
        auto nu_i = [&](double shift) {
            std::vector<double> x(n, 0.0);
            x[0] = r;
            x[i] += shift;
            double norm = 0.0;
            for (double c : x) norm += c * c;
            return x[i] / std::sqrt(norm);
        };
        div += (nu_i(h) - nu_i(-h)) / (2.0 * h);
    }
    return -0.5 * div;
}

RhResidualMultid rh_residual_multid(const ShockFront& f)
{
    RhResidualMultid res;
    const std::size_t N = f.times.size();
    if (N < 3) return res;
    const int n = f.n;
    const auto sd = time_derivative(f.times, f.s);
    const auto ed = time_derivative(f.times, f.e);
    res.speed.resize(N);
    res.mass.resize(N);
    res.mass_scaled.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double s = f.s[i], area = std::pow(s, n - 1);
        // S = r - s(t): S_t = -ds/dt, grad S = x/r, so G = -S_t / |grad S| = ds/dt.
        const double S_t = -sd[i], G = sd[i];
        const double u_delta = 0.5 * (f.q_plus[i] + f.q_minus[i]);
        res.speed[i] = S_t + u_delta;

        const double e_hat = f.e[i] / area;
        // d(e / s^(n-1))/dt by the product rule on the differenced e and s.
        const double de_hat = ed[i] / area - (n - 1) * e_hat * sd[i] / s;
        const double surface_div = -2.0 * mean_curvature(n, s) * G * e_hat;
        const double jqp = jump(f.q_minus[i] * f.p_minus[i], f.q_plus[i] * f.p_plus[i]);
        const double jp = jump(f.p_minus[i], f.p_plus[i]);
        const double rhs = (jqp - jp * sd[i]) / area;
        res.mass[i] = (de_hat + surface_div) - rhs;
        res.mass_scaled[i] = res.mass[i] * area;
    }
    return res;
}

void write_front_csv(std::ostream& os, const ShockFront& f)
{
    os << "# n=" << f.n << " jump=[f]=f(s-)-f(s+)\n";
    os << "t,s,e,q_plus,q_minus,p_plus,p_minus,res_speed,res_mass,res_multid\n";
    const auto r1 = rh_residual_1d(f);
    const auto rm = rh_residual_multid(f);
    const bool have = !r1.res_speed.empty();
    for (std::size_t i = 0; i < f.times.size(); ++i) {
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}", f.times[i], f.s[i], f.e[i],
                          f.q_plus[i], f.q_minus[i], f.p_plus[i], f.p_minus[i]);
        if (have)
            os << fmt::format(",{:.17g},{:.17g},{:.17g}\n", r1.res_speed[i], r1.res_mass[i], rm.mass_scaled[i]);
        else
            os << ",nan,nan,nan\n";
    }
}

}  // namespace zpgd
