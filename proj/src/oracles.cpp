#include "zpgd/oracles.hpp"

#include "zpgd/errors.hpp"
#include "zpgd/numerics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace zpgd::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double measure(int n) { return n == 1 ? 1.0 : num::sphere_measure(n); }

// Thomas algorithm; a sub-, b main, c super-diagonal. Overwrites d with the solution.
void solve_tridiagonal(std::vector<double> a, std::vector<double> b, std::vector<double> c, std::vector<double>& d)
{
    const std::size_t N = b.size();
    for (std::size_t i = 1; i < N; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    d[N - 1] /= b[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

}  // namespace

FdProblem FdProblem::from_bounded(const BoundedProblem& b)
{
    FdProblem f;
    f.n = b.dimension();
    f.epsilon = b.epsilon;
    f.r_in = b.r_inner();
    f.r_out = b.r_outer();
    f.q0 = b.q0;
    f.rho0 = b.rho0;
    const double qi = b.q1, qo = is_ball(b.kind) ? b.q_B : b.q2;
    f.q_in = [qi](double) { return qi; };
    f.q_out = [qo](double) { return qo; };
    const auto& ro = is_ball(b.kind) ? b.rho_B : b.rho2;
    if (b.rho1) f.rho_in = [prof = *b.rho1](double t) { return prof(t); };
    if (ro) f.rho_out = [prof = *ro](double t) { return prof(t); };
    return f;
}

FdSolution fd_viscous_solve(const FdProblem& pr, const FDSolverConfig& cfg)
{
    if (pr.n < 1 || pr.n > 3) throw DataError("fd solver: dimension must be 1, 2 or 3");
    if (!(pr.r_out > pr.r_in) || pr.r_in < 0.0) throw DataError("fd solver: need 0 <= r_in < r_out");
    if (!(pr.epsilon > 0.0)) throw DataError("fd solver: epsilon must be positive");
    if (cfg.cells < 8) throw DataError("fd solver: need at least 8 cells");
    if (!pr.q_out || (pr.r_in > 0.0 && !pr.q_in)) throw DataError("fd solver: boundary velocities missing");
    if (!std::is_sorted(cfg.output_times.begin(), cfg.output_times.end()) ||
        (!cfg.output_times.empty() && cfg.output_times.front() < 0.0))
        throw DataError("fd solver: output times must be ascending and >= 0");

    const int N = cfg.cells, n = pr.n;
    const double dr = (pr.r_out - pr.r_in) / N, eps = pr.epsilon;
    const bool centre = pr.r_in == 0.0;
    std::vector<double> r(N + 1), q(N + 1), P(N);
    for (int i = 0; i <= N; ++i) {
        r[i] = pr.r_in + i * dr;
        q[i] = pr.q0(r[i]);
    }
    if (centre) q[0] = 0.0;
    for (int j = 0; j < N; ++j)
        P[j] = num::integrate_panels([&](double x) { return std::pow(x, n - 1) * pr.rho0(x); }, r[j], r[j + 1], 1) /
               dr;

    const auto qin = [&](double t) { return centre ? 0.0 : pr.q_in(t); };
    double qmax = 0.0;
    for (double v : q) qmax = std::max(qmax, std::abs(v));
    if (cfg.dt > 0.0 && cfg.dt * qmax > cfg.cfl * dr)
        throw DataError(fmt::format("fd solver: dt={:.3g} violates the advective bound dt*max|q| <= {:.3g}*dr "
                                    "(max|q|={:.3g}, dr={:.3g})",
                                    cfg.dt, cfg.cfl, qmax, dr));

    // Linear diffusion operator rows: L q_i = lo q_{i-1} + mid q_i + hi q_{i+1}.
    std::vector<double> lo(N + 1, 0.0), mid(N + 1, 0.0), hi(N + 1, 0.0);
    for (int i = 1; i < N; ++i) {
        const double g = (n - 1) / r[i];
        lo[i] = 0.5 * eps * (1.0 / (dr * dr) - g / (2.0 * dr));
        hi[i] = 0.5 * eps * (1.0 / (dr * dr) + g / (2.0 * dr));
        mid[i] = 0.5 * eps * (-2.0 / (dr * dr) - (n - 1) / (r[i] * r[i]));
    }
    const auto advection = [&](const std::vector<double>& v) {
        std::vector<double> A(N + 1, 0.0);
        for (int i = 1; i < N; ++i) A[i] = -v[i] * (v[i + 1] - v[i - 1]) / (2.0 * dr);
        return A;
    };
    const double omega = measure(n);
    const double p_in_area = std::pow(pr.r_in, n - 1), p_out_area = std::pow(pr.r_out, n - 1);
    const auto flux = [&](double t, int i) {
        // Upwind flux of p q through node i.
        const double v = q[i];
        if (i == 0) {
            if (v > 0.0) {
                if (!pr.rho_in) throw DataError("fd solver: inflow at the inner boundary needs rho_in");
                return v * p_in_area * pr.rho_in(t);
            }
            return v * P[0];
        }
        if (i == N) {
            if (v < 0.0) {
                if (!pr.rho_out) throw DataError("fd solver: inflow at the outer boundary needs rho_out");
                return v * p_out_area * pr.rho_out(t);
            }
            return v * P[N - 1];
        }
        return v * (v >= 0.0 ? P[i - 1] : P[i]);
    };
    const auto total_mass = [&] {
        double m = 0.0;
        for (double x : P) m += x;
        return omega * m * dr;
    };

    FdSolution out;
    auto& F = out.field;
    F.n = n;
    F.epsilon = eps;
    F.r = r;
    F.t = cfg.output_times;
    F.q.assign(r.size() * F.t.size(), 0.0);
    F.p.assign(r.size() * F.t.size(), 0.0);
    const auto record = [&](std::size_t k, long steps) {
        for (int i = 0; i <= N; ++i) {
            double pv;
            if (i == 0) pv = P[0];
            else if (i == N) pv = P[N - 1];
            else pv = 0.5 * (P[i - 1] + P[i]);
            F.q[F.index(k, i)] = q[i];
            F.p[F.index(k, i)] = pv;
        }
        out.mass.push_back(total_mass());
        out.outflow.push_back(omega * (flux(F.t[k], N) - flux(F.t[k], 0)));
        out.steps.push_back(static_cast<double>(steps));
    };

    double t = 0.0, dt_prev = 0.0;
    long steps = 0;
    std::vector<double> A_prev;
    std::size_t next = 0;
    while (next < cfg.output_times.size() && cfg.output_times[next] <= 0.0) record(next++, 0);
    while (next < cfg.output_times.size()) {
        qmax = 0.0;
        for (double v : q) qmax = std::max(qmax, std::abs(v));
        double dt = cfg.dt > 0.0 ? cfg.dt : std::min(cfg.max_dt, qmax > 0.0 ? cfg.cfl * dr / qmax : kInf);
        if (cfg.dt > 0.0 && dt * qmax > dr)
            throw NumericalError(fmt::format("fd solver: advective bound lost at t={:.6g} (max|q|={:.3g})", t, qmax));
        const double target = cfg.output_times[next];
        bool hit = false;
        if (t + dt >= target - 1e-12 * std::max(1.0, target)) {
            dt = target - t;
            hit = true;
        }

        // Density first, with the velocity at the old level.
        std::vector<double> Fl(N + 1);
        for (int i = 0; i <= N; ++i) Fl[i] = flux(t, i);
        for (int j = 0; j < N; ++j) P[j] -= dt / dr * (Fl[j + 1] - Fl[j]);

        // Two backward-Euler starting steps damp the stiff modes before Crank-Nicolson takes over.
        const bool start = steps < 2;
        const double theta = start ? 1.0 : 0.5;
        const auto A = advection(q);
        std::vector<double> a(N + 1, 0.0), b(N + 1, 1.0), c(N + 1, 0.0), rhs(N + 1, 0.0);
        for (int i = 1; i < N; ++i) {
            a[i] = -theta * dt * lo[i];
            b[i] = 1.0 - theta * dt * mid[i];
            c[i] = -theta * dt * hi[i];
            const double Lq = lo[i] * q[i - 1] + mid[i] * q[i] + hi[i] * q[i + 1];
            double adv = A[i];
            if (!start && !A_prev.empty()) {
                const double w = dt / dt_prev;
                adv = (1.0 + 0.5 * w) * A[i] - 0.5 * w * A_prev[i];
            }
            rhs[i] = q[i] + (1.0 - theta) * dt * Lq + dt * adv;
        }
        rhs[0] = qin(t + dt);
        rhs[N] = pr.q_out(t + dt);
        solve_tridiagonal(a, b, c, rhs);
        q = std::move(rhs);
        A_prev = A;
        dt_prev = dt;
        t = hit ? target : t + dt;
        ++steps;
        for (double v : q)
            if (!std::isfinite(v)) throw NumericalError(fmt::format("fd solver: non-finite velocity at t={:.6g}", t));
        while (next < cfg.output_times.size() && cfg.output_times[next] <= t + 1e-12 * std::max(1.0, t))
            record(next++, steps);
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

double r0_extent(const InviscidProblem& p, double r, double t)
{
    double R0 = r + t * p.q0.sup_abs(0.0, r + 1.0);
    for (int k = 0; k < 8; ++k) {
        const double next = r + t * p.q0.sup_abs(0.0, R0);
        if (next <= R0 * (1.0 + 1e-12)) break;
        R0 = next;
    }
    return std::max(R0, 1e-12);
}

struct SharedGrid {
    std::vector<double> r0, phi0;  // r0 nodes and int_0^r0 q0
    std::vector<double> tk, F;     // t nodes and the boundary credit there
    // Prefix minimum over k1 <= k of G0(t_k1) + F(t_k1), with its argmin.
    std::vector<double> best;
    std::vector<int> best_k1, best_j;
};

SharedGrid make_grid(const InviscidProblem& p, double R0, double tmax, int d)
{
    SharedGrid g;
    g.r0.resize(d + 1);
    g.phi0.resize(d + 1);
    for (int j = 0; j <= d; ++j) {
        g.r0[j] = R0 * j / d;
        g.phi0[j] = p.potential(g.r0[j]);
    }
    g.tk.resize(d);
    g.F.resize(d);
    g.best.resize(d);
    g.best_k1.resize(d);
    g.best_j.resize(d);
    double run = kInf;
    int rk = 0, rj = 0;
    for (int k = 0; k < d; ++k) {
        const double tk = tmax * k / d;
        g.tk[k] = tk;
        g.F[k] = p.boundary_credit(tk);
        // G0(t_k): cheapest arrival at the origin at time t_k.
        double G0 = kInf;
        int jarg = 0;
        if (k == 0) {
            G0 = g.phi0[0];
        } else {
            for (int j = 0; j <= d; ++j) {
                const double v = g.phi0[j] + g.r0[j] * g.r0[j] / (2.0 * tk);
                if (v < G0) {
                    G0 = v;
                    jarg = j;
                }
            }
        }
        if (G0 + g.F[k] < run) {
            run = G0 + g.F[k];
            rk = k;
            rj = jarg;
        }
        g.best[k] = run;
        g.best_k1[k] = rk;
        g.best_j[k] = rj;
    }
    return g;
}

BruteForceResult search(const SharedGrid& g, double r, double t)
{
    BruteForceResult res;
    res.value = kInf;
    for (std::size_t j = 0; j < g.r0.size(); ++j) {
        const double d = r - g.r0[j];
        const double v = g.phi0[j] + d * d / (2.0 * t);
        if (v < res.value) {
            res.value = v;
            res.r0 = g.r0[j];
        }
    }
    for (std::size_t k = 0; k < g.tk.size() && g.tk[k] < t; ++k) {
        if (!std::isfinite(g.best[k])) continue;
        const double v = g.best[k] + r * r / (2.0 * (t - g.tk[k])) - g.F[k];
        if (v < res.value) {
            res.value = v;
            res.branch = Branch::Boundary;
            res.r0 = g.r0[g.best_j[k]];
            res.t1 = g.tk[g.best_k1[k]];
            res.t2 = g.tk[k];
        }
    }
    return res;
}

}  // namespace

BruteForceResult brute_force_Q(const InviscidProblem& p, double r, double t, int grid_density)
{
    if (grid_density < 50) throw DomainError("brute_force_Q: grid_density must be >= 50");
    if (!(t > 0.0) || r < 0.0) throw DomainError("brute_force_Q: need r >= 0, t > 0");
    const auto g = make_grid(p, r0_extent(p, r, t), t, grid_density);
    return search(g, r, t);
}

std::vector<BruteForceResult> brute_force_panel(const InviscidProblem& p, const std::vector<double>& r,
                                                const std::vector<double>& t, int grid_density, int threads)
{
    if (grid_density < 50) throw DomainError("brute_force_panel: grid_density must be >= 50");
    if (r.empty() || t.empty()) return {};
    const double rmax = *std::max_element(r.begin(), r.end());
    const double tmax = *std::max_element(t.begin(), t.end());
    if (!(*std::min_element(t.begin(), t.end()) > 0.0)) throw DomainError("brute_force_panel: times must be positive");
    const auto g = make_grid(p, r0_extent(p, rmax, tmax), tmax, grid_density);
    std::vector<BruteForceResult> out(r.size() * t.size());
    num::parallel_for(out.size(), threads, [&](std::size_t idx) {
        out[idx] = search(g, r[idx % r.size()], t[idx / r.size()]);
    });
    return out;
}

// ---------------------------------------------------------------------------

std::vector<Particle> particles_from_profile(const ScalarProfile& q0, const ScalarProfile& p0, double a, double b,
                                             int count)
{
    if (!(b > a) || a < 0.0 || count < 1) throw DomainError("particles_from_profile: need 0 <= a < b, count >= 1");
    std::vector<Particle> out;
    const double h = (b - a) / count;
    for (int i = 0; i < count; ++i) {
        const double lo = a + i * h, c = lo + 0.5 * h;
        const double m = p0.integral(lo, lo + h);
        if (m > 0.0) out.push_back({c, m, q0(c)});
    }
    return out;
}

namespace {

// Merges touching, approaching neighbours; returns true if anything merged.
bool merge_contacts(std::vector<Particle>& ps)
{
    bool any = false;
    std::vector<Particle> out;
    out.reserve(ps.size());
    for (const auto& p : ps) {
        if (!out.empty()) {
            auto& q = out.back();
            const double gap = p.r - q.r;
            if (gap <= 1e-12 * (1.0 + std::abs(p.r)) && q.v >= p.v) {
                const double M = q.m + p.m;
                q.v = (q.m * q.v + p.m * p.v) / M;
                q.r = (q.m * q.r + p.m * p.r) / M;
                q.m = M;
                any = true;
                continue;
            }
        }
        out.push_back(p);
    }
    ps = std::move(out);
    return any;
}

}  // namespace

std::vector<ParticleSnapshot> sticky_particle_run(std::vector<Particle> ps, const std::vector<double>& times,
                                                  const StickyOptions& opts)
{
    if (!std::is_sorted(ps.begin(), ps.end(), [](const Particle& a, const Particle& b) { return a.r < b.r; }))
        throw DomainError("sticky_particle_run: particles must be sorted by position");
    if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0))
        throw DomainError("sticky_particle_run: times must be ascending and >= 0");
    const bool inject = opts.q_B && opts.p_B;
    std::vector<ParticleSnapshot> out;
    double now = 0.0, absorbed = 0.0;
    double next_injection = inject ? opts.injection_interval : kInf;
    merge_contacts(ps);

    for (double target : times) {
        while (true) {
            double tau = kInf;
            for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
                const double dv = ps[i].v - ps[i + 1].v;
                if (dv > 0.0) tau = std::min(tau, std::max(0.0, ps[i + 1].r - ps[i].r) / dv);
            }
            if (!ps.empty() && ps.front().v < 0.0) tau = std::min(tau, ps.front().r / -ps.front().v);
            const double t_event = std::min(now + tau, next_injection);
            const double step = std::min(t_event, target) - now;
            for (auto& p : ps) p.r += p.v * step;
            now += step;
            if (now >= target && t_event > target) break;

            // Absorb at the origin.
            while (!ps.empty() && ps.front().v < 0.0 && ps.front().r <= 1e-12) {
                absorbed += ps.front().m;
                ps.erase(ps.begin());
            }
            for (auto& p : ps) p.r = std::max(p.r, 0.0);
            merge_contacts(ps);

            if (inject && now >= next_injection) {
                const double qb = (*opts.q_B)(now);
                if (qb > 0.0) {
                    const double dm = ((*opts.p_B)(now) - (*opts.p_B)(now - opts.injection_interval)) / opts.omega;
                    if (dm > 0.0) ps.insert(ps.begin(), Particle{0.0, dm, qb});
                }
                next_injection += opts.injection_interval;
            }
            if (now >= target) break;
        }
        out.push_back({target, ps, absorbed});
    }
    return out;
}

Particle heaviest(const ParticleSnapshot& s)
{
    if (s.particles.empty()) throw DomainError("heaviest: empty snapshot");
    return *std::max_element(s.particles.begin(), s.particles.end(),
                             [](const Particle& a, const Particle& b) { return a.m < b.m; });
}

RadialField reconstruct(const ParticleSnapshot& s, const std::vector<double>& r_grid, double h, int n)
{
    if (!(h > 0.0)) throw DomainError("reconstruct: kernel width must be positive");
    RadialField f;
    f.n = n;
    f.r = r_grid;
    f.t = {s.t};
    f.q.assign(r_grid.size(), 0.0);
    f.p.assign(r_grid.size(), 0.0);
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        double mass = 0.0, mom = 0.0;
        for (const auto& p : s.particles) {
            const double w = std::max(0.0, 1.0 - std::abs(r_grid[i] - p.r) / h) / h;
            mass += p.m * w;
            mom += p.m * p.v * w;
        }
        f.p[i] = mass;
        f.q[i] = mass > 0.0 ? mom / mass : 0.0;
    }
    return f;
}

void write_particle_csv(std::ostream& os, const std::vector<ParticleSnapshot>& run)
{
    os << "t,index,r,m,v\n";
    for (const auto& s : run)
        for (std::size_t i = 0; i < s.particles.size(); ++i)
            os << fmt::format("{:.17g},{},{:.17g},{:.17g},{:.17g}\n", s.t, i, s.particles[i].r, s.particles[i].m,
                              s.particles[i].v);
}

}  // namespace zpgd::oracle
