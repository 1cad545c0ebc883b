#include "zpgd/freespace.hpp"

#include "zpgd/errors.hpp"
#include "zpgd/numerics.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace zpgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Weights below exp(-kLogCut) of the peak are dropped (about 1e-20).
constexpr double kLogCut = 46.0;

struct Box {
    std::vector<double> lo, hi;
    std::vector<bool> hard_lo;  // lower edge is a true domain boundary (cannot expand)
};

/**
 * Shrinks (or grows) a box until it just contains the region where the log
 * weight is within kLogCut of its maximum, judged on a coarse tensor grid.
 */
template <class LogW>
Box locate_mass(LogW&& logw, Box box, int grid)
{
    const std::size_t d = box.lo.size();
    std::vector<double> y(d);
    for (int iter = 0; iter < 60; ++iter) {
        std::vector<double> h(d);
        for (std::size_t k = 0; k < d; ++k) h[k] = (box.hi[k] - box.lo[k]) / (grid - 1);

        std::size_t total = 1;
        for (std::size_t k = 0; k < d; ++k) total *= grid;
        std::vector<double> vals(total);
        double vmax = -kInf;
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rem = idx;
            for (std::size_t k = 0; k < d; ++k) {
                y[k] = box.lo[k] + h[k] * static_cast<double>(rem % grid);
                rem /= grid;
            }
            vals[idx] = logw(std::span<const double>(y));
            vmax = std::max(vmax, vals[idx]);
        }
        if (!std::isfinite(vmax)) throw NumericalError("quadrature: integrand weight vanishes on the search box");

        std::vector<int> imin(d, grid), imax(d, -1);
        for (std::size_t idx = 0; idx < total; ++idx) {
            if (vals[idx] < vmax - kLogCut) continue;
            std::size_t rem = idx;
            for (std::size_t k = 0; k < d; ++k) {
                const int i = static_cast<int>(rem % grid);
                rem /= grid;
                imin[k] = std::min(imin[k], i);
                imax[k] = std::max(imax[k], i);
            }
        }

        bool expanded = false, shrunk = false;
        Box next = box;
        for (std::size_t k = 0; k < d; ++k) {
            const double width = box.hi[k] - box.lo[k];
            if (imax[k] == grid - 1) {
                next.hi[k] = box.hi[k] + width;
                expanded = true;
            } else {
                next.hi[k] = box.lo[k] + h[k] * (imax[k] + 1);
            }
            if (imin[k] == 0 && !box.hard_lo[k]) {
                next.lo[k] = box.lo[k] - width;
                expanded = true;
            } else {
                next.lo[k] = box.lo[k] + h[k] * std::max(imin[k] - 1, 0);
            }
            if (!expanded && (next.hi[k] - next.lo[k]) < 0.9 * width) shrunk = true;
        }
        if (expanded) {
            // Only grow the sides that touched; keep the others.
            for (std::size_t k = 0; k < d; ++k) {
                if (imax[k] != grid - 1) next.hi[k] = box.hi[k];
                if (!(imin[k] == 0 && !box.hard_lo[k])) next.lo[k] = box.lo[k];
            }
            box = next;
            continue;
        }
        if (!shrunk) return box;
        box = next;
    }
    return box;
}

/// Tensor Gauss-Legendre nodes over a box, P panels per dimension.
struct TensorNodes {
    std::vector<std::vector<double>> x;  // per dimension
    std::vector<std::vector<double>> w;
};

TensorNodes tensor_nodes(const Box& box, int panels)
{
    TensorNodes t;
    for (std::size_t k = 0; k < box.lo.size(); ++k) {
        auto q = num::panel_nodes(box.lo[k], box.hi[k], panels);
        t.x.push_back(std::move(q.x));
        t.w.push_back(std::move(q.w));
    }
    return t;
}

template <class Visit>
void for_each_node(const TensorNodes& nodes, Visit&& visit)
{
    const std::size_t d = nodes.x.size();
    const std::size_t m = nodes.x[0].size();
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) total *= m;
    std::vector<double> y(d);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        double w = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t i = rem % m;
            rem /= m;
            y[k] = nodes.x[k][i];
            w *= nodes.w[k][i];
        }
        visit(std::span<const double>(y), w);
    }
}

// Scaled angular factors for the radial route: S(kappa) = e^{-kappa} * (angular average of e^{kappa cos}),
// L = d log(angular average)/d kappa, and dL/dkappa.
struct Angular {
    double log_s, L, dL;
};

double scaled_i_asymptotic(int nu, double x)
{
    const double mu = 4.0 * nu * nu, z = 8.0 * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 8; ++k) {
        term *= -(mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * z);
        sum += term;
    }
    return sum / std::sqrt(2.0 * num::pi * x);
}

Angular angular(int n, double kappa)
{
    Angular a{};
    switch (n) {
    case 1: {
        const double e = std::exp(-2.0 * kappa);
        a.log_s = std::log(0.5 * (1.0 + e));
        a.L = std::tanh(kappa);
        a.dL = 1.0 - a.L * a.L;
        break;
    }
    case 2: {
        double i0, i1;
        if (kappa < 600.0) {
            const double s = std::exp(-kappa);
            i0 = boost::math::cyl_bessel_i(0, kappa) * s;
            i1 = boost::math::cyl_bessel_i(1, kappa) * s;
        } else {
            i0 = scaled_i_asymptotic(0, kappa);
            i1 = scaled_i_asymptotic(1, kappa);
        }
        a.log_s = std::log(i0);
        a.L = i1 / i0;
        if (kappa > 100.0) {
            // 1 - L/kappa - L^2 cancels badly here; use its expansion in 1/kappa.
            static constexpr double c[] = {1.0 / 2,          1.0 / 4,        3.0 / 8,
                                           25.0 / 32,        65.0 / 32,      3219.0 / 512,
                                           721.0 / 32,       375733.0 / 4096, 214173.0 / 512};
            const double u = 1.0 / kappa;
            double sum = 0.0;
            for (int k = 8; k >= 0; --k) sum = sum * u + c[k];
            a.dL = sum * u * u;
        } else {
            a.dL = kappa > 1e-8 ? 1.0 - a.L / kappa - a.L * a.L : 0.5;
        }
        break;
    }
    case 3: {
        if (kappa < 0.05) {
            const double k2 = kappa * kappa;
            a.L = kappa * (1.0 / 3 - k2 / 45 + 2 * k2 * k2 / 945 - k2 * k2 * k2 / 4725);
            a.dL = 1.0 / 3 - k2 / 15 + 2 * k2 * k2 / 189 - k2 * k2 * k2 / 675;
            a.log_s = kappa == 0.0 ? 0.0 : std::log(-std::expm1(-2.0 * kappa) / (2.0 * kappa));
        } else {
            a.log_s = std::log(-std::expm1(-2.0 * kappa) / (2.0 * kappa));
            a.L = 1.0 / std::tanh(kappa) - 1.0 / kappa;
            const double sh = kappa < 300.0 ? std::sinh(kappa) : kInf;
            a.dL = 1.0 / (kappa * kappa) - 1.0 / (sh * sh);
        }
        break;
    }
    default: throw DomainError("freespace: dimension must be 1, 2 or 3");
    }
    return a;
}

void require_time(double t)
{
    if (!(t > 0.0)) throw DomainError(fmt::format("freespace: t must be positive (got {})", t));
}

double norm(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace

FreespaceProblem FreespaceProblem::radial(int n, double epsilon, ScalarProfile q0, ScalarProfile rho0)
{
    FreespaceProblem p;
    p.n = n;
    p.epsilon = epsilon;
    p.q0 = std::move(q0);
    p.rho0 = std::move(rho0);
    p.validate();
    return p;
}

FreespaceProblem FreespaceProblem::general(int n, double epsilon, Potential phi0, Gradient grad,
                                           std::optional<double> bound, ScalarProfile rho0)
{
    FreespaceProblem p;
    p.n = n;
    p.epsilon = epsilon;
    p.phi0 = std::move(phi0);
    p.grad_phi0 = std::move(grad);
    p.gradient_bound = bound;
    p.rho0 = std::move(rho0);
    p.validate();
    return p;
}

void FreespaceProblem::validate() const
{
    if (n < 1 || n > 3) throw DataError("freespace: dimension must be 1, 2 or 3");
    if (!(epsilon > 0.0)) throw DataError("freespace: epsilon must be positive");
    if (!q0 && (!phi0 || !grad_phi0)) throw DataError("freespace: need a radial q0 or phi0 with its gradient");
}

double FreespaceProblem::potential(std::span<const double> x) const
{
    if (q0) return q0->integral(0.0, norm(x));
    return phi0(x);
}

void FreespaceProblem::gradient(std::span<const double> x, std::span<double> g) const
{
    if (q0) {
        const double r = norm(x);
        const double q = (*q0)(r);
        for (std::size_t k = 0; k < x.size(); ++k) g[k] = r > 0.0 ? q * x[k] / r : 0.0;
        return;
    }
    grad_phi0(x, g);
}

double gradient_sup(const FreespaceProblem& p)
{
    if (p.q0) {
        const double s = p.q0->sup_abs();
        if (!std::isfinite(s))
            throw DataError("freespace: initial potential is not Lipschitz (radial velocity profile unbounded)");
        return s;
    }
    if (p.gradient_bound) return *p.gradient_bound;

    // Probe |grad phi0| on growing shells along the coordinate and diagonal directions.
    std::vector<double> x(p.n), g(p.n);
    double sup = 0.0, shell_prev = 0.0;
    for (int e = 0; e <= 6; ++e) {
        const double radius = std::pow(10.0, e);
        double shell = 0.0;
        for (int dir = 0; dir < 2 * p.n + 2; ++dir) {
            std::fill(x.begin(), x.end(), 0.0);
            if (dir < 2 * p.n) {
                x[dir / 2] = dir % 2 ? -radius : radius;
            } else {
                for (auto& v : x) v = (dir % 2 ? -radius : radius) / std::sqrt(double(p.n));
            }
            p.grad_phi0(x, g);
            shell = std::max(shell, norm(g));
        }
        if (e >= 3 && shell > 10.0 * std::max(shell_prev, 1e-300) && shell > 1e3)
            throw DataError("freespace: gradient of phi0 grows without bound (phi0 is not Lipschitz)");
        shell_prev = shell;
        sup = std::max(sup, shell);
    }
    return sup;
}

RadialVelocity radial_velocity(const FreespaceProblem& p, double r, double t)
{
    require_time(t);
    if (!p.q0) throw DataError("radial_velocity: problem is not radial");
    if (r < 0.0) throw DomainError("radial_velocity: r must be >= 0");
    const ScalarProfile& q0 = *p.q0;
    const double eps = p.epsilon, et = eps * t;
    const int n = p.n;

    const auto logw = [&](double y) {
        if (y < 0.0) return -kInf;
        if (n > 1 && y == 0.0) return -kInf;
        const double kappa = r * y / et;
        const double d = r - y;
        double lw = -(d * d / (2.0 * t) + q0.integral(0.0, y)) / eps + angular(n, kappa).log_s;
        if (n > 1) lw += (n - 1) * std::log(y);
        return lw;
    };

    Box box;
    const double M = q0.sup_abs();
    double reach = std::isfinite(M) ? M * t + std::sqrt(M * M * t * t + 2.0 * t * 60.0 * eps) : 0.0;
    reach += 8.0 * std::sqrt(et) + 1e-12;
    box.lo = {std::max(0.0, r - reach)};
    box.hi = {r + reach};
    box.hard_lo = {box.lo[0] == 0.0};
    if (!box.hard_lo[0] && !std::isfinite(M)) box.hard_lo[0] = false;
    box = locate_mass([&](std::span<const double> y) { return logw(y[0]); }, box, 201);
    if (box.lo[0] < 0.0) box.lo[0] = 0.0;

    RadialVelocity prev{kInf, kInf}, cur{};
    for (int panels = 8; panels <= 1024; panels *= 2) {
        // The weight is only piecewise smooth: panel edges go at the breaks of q0.
        const auto nodes = num::panel_nodes(box.lo[0], box.hi[0], panels, q0.breaks());
        const std::size_t m = nodes.x.size();
        std::vector<double> lw(m), X(m), D(m);
        double lmax = -kInf;
        for (std::size_t i = 0; i < m; ++i) {
            const double y = nodes.x[i];
            const auto ang = angular(n, r * y / et);
            lw[i] = logw(y);
            X[i] = y * ang.L;
            D[i] = y * y * ang.dL;
            lmax = std::max(lmax, lw[i]);
        }
        double Z = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double w = nodes.w[i] * std::exp(lw[i] - lmax);
            Z += w;
            m1 += w * X[i];
            m2 += w * D[i];
        }
        m1 /= Z;
        m2 /= Z;
        double var = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double w = nodes.w[i] * std::exp(lw[i] - lmax);
            var += w * (X[i] - m1) * (X[i] - m1);
        }
        var /= Z;
        cur.q = (r - m1) / t;
        cur.q_r = (1.0 - (m2 + var) / et) / t;
        const double scale_q = 1e-13 * std::max(1.0, std::abs(r) / t);
        if (std::abs(cur.q - prev.q) < scale_q && std::abs(cur.q_r - prev.q_r) < 1e-9 * std::max(1.0, std::abs(cur.q_r)))
            return cur;
        prev = cur;
    }
    return cur;
}

std::pair<std::vector<double>, std::vector<double>> velocity_direct_with_gradient(const FreespaceProblem& p,
                                                                                 std::span<const double> x,
                                                                                 double t)
{
    require_time(t);
    const std::size_t d = static_cast<std::size_t>(p.n);
    if (x.size() != d) throw DataError("freespace: point dimension mismatch");
    const double eps = p.epsilon, s2t = std::sqrt(2.0 * t);

    std::vector<double> z(d);
    const auto exponent = [&](std::span<const double> y) {
        double yy = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            z[k] = x[k] - s2t * y[k];
            yy += y[k] * y[k];
        }
        return -(yy + p.potential(z)) / eps;
    };

    Box box;
    double half;
    std::optional<double> M = p.gradient_bound;
    if (p.q0 && std::isfinite(p.q0->sup_abs())) M = p.q0->sup_abs();
    if (M) half = 0.5 * (*M * s2t + std::sqrt(2.0 * t * *M * *M + 4.0 * kLogCut * eps));
    else half = std::max(1.0, 8.0 * std::sqrt(eps));
    half += 1e-12;
    box.lo.assign(d, -half);
    box.hi.assign(d, half);
    box.hard_lo.assign(d, false);
    const int grid = d == 1 ? 401 : d == 2 ? 61 : 21;
    box = locate_mass(exponent, box, grid);

    const int max_panels = d == 1 ? 512 : d == 2 ? 128 : 16;
    std::vector<double> u_prev(d, kInf), u(d), jac(d * d);
    for (int panels = 2; panels <= max_panels; panels *= 2) {
        const auto nodes = tensor_nodes(box, panels);
        double lmax = -kInf;
        for_each_node(nodes, [&](std::span<const double> y, double) { lmax = std::max(lmax, exponent(y)); });
        // Averaging the displacement (x - z) / t rather than grad phi0(z) keeps the
        // integrand continuous where phi0 has kinks.
        double Z = 0.0;
        std::vector<double> Y(d, 0.0), YY(d * d, 0.0);
        for_each_node(nodes, [&](std::span<const double> y, double w) {
            const double wt = w * std::exp(exponent(y) - lmax);
            Z += wt;
            for (std::size_t j = 0; j < d; ++j) {
                Y[j] += wt * y[j];
                for (std::size_t k = 0; k < d; ++k) YY[j * d + k] += wt * y[j] * y[k];
            }
        });
        double change = 0.0, scale = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            u[j] = s2t / t * Y[j] / Z;
            change = std::max(change, std::abs(u[j] - u_prev[j]));
            scale = std::max(scale, std::abs(u[j]));
        }
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                const double cov = YY[j * d + k] / Z - (Y[j] / Z) * (Y[k] / Z);
                jac[j * d + k] = ((j == k ? 1.0 : 0.0) - 2.0 * cov / eps) / t;
            }
        if (change < 1e-12 * scale) break;
        u_prev = u;
    }
    return {u, jac};
}

std::vector<double> velocity_direct(const FreespaceProblem& p, std::span<const double> x, double t)
{
    return velocity_direct_with_gradient(p, x, t).first;
}

std::vector<double> velocity(const FreespaceProblem& p, std::span<const double> x, double t)
{
    require_time(t);
    if (static_cast<int>(x.size()) != p.n) throw DataError("freespace: point dimension mismatch");
    if (!p.q0) return velocity_direct(p, x, t);
    const double r = norm(x);
    std::vector<double> u(x.size(), 0.0);
    if (r == 0.0) return u;
    const double q = radial_velocity(p, r, t).q;
    for (std::size_t k = 0; k < x.size(); ++k) u[k] = q * x[k] / r;
    return u;
}

namespace {

// Velocity and Jacobian, with the t -> 0 limit taken from the initial data.
void velocity_and_jacobian(const FreespaceProblem& p, std::span<const double> x, double t, std::span<double> u,
                           std::span<double> J)
{
    const std::size_t d = x.size();
    if (p.q0) {
        const double r = norm(x);
        RadialVelocity rv;
        if (t > 0.0) {
            rv = radial_velocity(p, r, t);
        } else {
            rv.q = (*p.q0)(r);
            rv.q_r = p.q0->derivative(r);
        }
        const double q_over_r = r > 1e-12 ? rv.q / r : rv.q_r;
        for (std::size_t j = 0; j < d; ++j) {
            const double xj = r > 0.0 ? x[j] / r : 0.0;
            u[j] = rv.q * xj;
            for (std::size_t k = 0; k < d; ++k) {
                const double xk = r > 0.0 ? x[k] / r : 0.0;
                J[j * d + k] = (rv.q_r - q_over_r) * xj * xk + (j == k ? q_over_r : 0.0);
            }
        }
        return;
    }
    if (!(t > 0.0)) throw DomainError("freespace: general potentials need t > 0 for the Jacobian");
    auto [uu, jj] = velocity_direct_with_gradient(p, x, t);
    std::copy(uu.begin(), uu.end(), u.begin());
    std::copy(jj.begin(), jj.end(), J.begin());
}

double determinant(std::vector<double> a, std::size_t n)
{
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (a[piv * n + c] == 0.0) return 0.0;
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
            det = -det;
        }
        det *= a[c * n + c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / a[c * n + c];
            for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
        }
    }
    return det;
}

}  // namespace

std::vector<double> velocity_gradient(const FreespaceProblem& p, std::span<const double> x, double t)
{
    require_time(t);
    if (static_cast<int>(x.size()) != p.n) throw DataError("freespace: point dimension mismatch");
    std::vector<double> u(x.size()), J(x.size() * x.size());
    velocity_and_jacobian(p, x, t, u, J);
    return J;
}

CharacteristicFoot trace_characteristic(const FreespaceProblem& p, std::span<const double> x, double t)
{
    require_time(t);
    const std::size_t d = static_cast<std::size_t>(p.n);
    if (x.size() != d) throw DataError("freespace: point dimension mismatch");

    // State: X (d), M (d x d, row-major).
    std::vector<double> y(d + d * d, 0.0);
    std::copy(x.begin(), x.end(), y.begin());
    for (std::size_t k = 0; k < d; ++k) y[d + k * d + k] = 1.0;

    std::vector<double> u(d), J(d * d);
    const num::OdeRhs rhs = [&](double s, std::span<const double> st, std::span<double> dy) {
        velocity_and_jacobian(p, st.subspan(0, d), s, u, J);
        for (std::size_t j = 0; j < d; ++j) {
            dy[j] = u[j];
            for (std::size_t k = 0; k < d; ++k) {
                double v = 0.0;
                for (std::size_t m = 0; m < d; ++m) v += J[j * d + m] * st[d + m * d + k];
                dy[d + j * d + k] = v;
            }
        }
    };
    // Integrate in tau = sqrt(s): the field varies on the scale sqrt(eps s) near
    // kinks of the initial data, which costs many steps in s but few in tau.
    const num::OdeRhs rhs_tau = [&](double tau, std::span<const double> st, std::span<double> dy) {
        rhs(tau * tau, st, dy);
        for (double& v : dy) v *= 2.0 * tau;
    };
    num::OdeOptions opts;
    opts.rtol = 1e-9;
    opts.atol = 1e-11;
    opts.h_initial = 1e-2 * std::sqrt(t);
    // The velocity integral degenerates at s = 0; stop just short and finish with the initial field.
    const double s_end = 1e-12 * t;
    auto res = num::integrate_ode(rhs_tau, std::sqrt(t), std::sqrt(s_end), y, opts);
    {
        std::vector<double> dy(y.size());
        rhs(s_end, res.y, dy);
        for (std::size_t i = 0; i < y.size(); ++i) res.y[i] -= s_end * dy[i];
    }

    CharacteristicFoot foot;
    foot.X0.assign(res.y.begin(), res.y.begin() + d);
    foot.jac = determinant(std::vector<double>(res.y.begin() + d, res.y.end()), d);
    if (!(foot.jac > 0.0)) throw NumericalError("trace_characteristic: Jacobian determinant lost positivity");
    return foot;
}

std::vector<double> forward_trace(const FreespaceProblem& p, std::span<const double> x0, double t)
{
    require_time(t);
    const std::size_t d = static_cast<std::size_t>(p.n);
    std::vector<double> u(d), J(d * d);
    const num::OdeRhs rhs = [&](double s, std::span<const double> st, std::span<double> dy) {
        velocity_and_jacobian(p, st, s, u, J);
        std::copy(u.begin(), u.end(), dy.begin());
    };
    num::OdeOptions opts;
    opts.h_initial = 1e-2 * t;
    double s0 = 0.0;
    std::vector<double> y(x0.begin(), x0.end());
    if (!p.q0) {
        s0 = 1e-9 * t;
        std::vector<double> g(d);
        p.gradient(y, g);
        for (std::size_t k = 0; k < d; ++k) y[k] += s0 * g[k];
    }
    return num::integrate_ode(rhs, s0, t, y, opts).y;
}

double density(const FreespaceProblem& p, std::span<const double> x, double t)
{
    if (t == 0.0) return p.rho0(norm(x));
    const auto foot = trace_characteristic(p, x, t);
    return p.rho0(norm(foot.X0)) * foot.jac;
}

MassEstimate total_mass(const FreespaceProblem& p, double t, const QuadratureSpec& spec)
{
    if (t < 0.0) throw DomainError("total_mass: t must be >= 0");
    const double support = p.rho0.support_end();
    if (!std::isfinite(support)) throw DataError("total_mass: rho0 must have compact support");
    if (p.rho0.identically_zero() || support <= 0.0) return {};
    const int n = p.n;
    const std::size_t d = static_cast<std::size_t>(n);

    // Radius of the image of the support edge.
    double edge = support;
    if (t > 0.0) {
        std::vector<double> e(d, 0.0);
        e[0] = support;
        edge = norm(forward_trace(p, e, t));
        if (!p.q0) {
            for (std::size_t k = 0; k < d; ++k)
                for (double sgn : {-1.0, 1.0}) {
                    std::fill(e.begin(), e.end(), 0.0);
                    e[k] = sgn * support;
                    edge = std::max(edge, norm(forward_trace(p, e, t)));
                }
            edge *= 1.25;
        }
    }

    const auto radial_mass = [&](int panels) {
        const auto f = [&](double r) {
            std::vector<double> x(d, 0.0);
            x[0] = r;
            return std::pow(r, n - 1) * density(p, x, t);
        };
        return num::sphere_measure(n) * num::integrate_panels(f, 0.0, edge, panels);
    };
    const auto tensor_mass = [&](int panels) {
        Box box;
        box.lo.assign(d, -edge);
        box.hi.assign(d, edge);
        box.hard_lo.assign(d, true);
        const auto nodes = tensor_nodes(box, panels);
        double m = 0.0;
        for_each_node(nodes, [&](std::span<const double> x, double w) { m += w * density(p, x, t); });
        return m;
    };

    const bool radial = p.q0.has_value();
    const int panels = std::max(2, spec.panels);
    MassEstimate est;
    est.mass = radial ? radial_mass(panels) : tensor_mass(panels);
    const double coarse = radial ? radial_mass(std::max(1, panels / 2)) : tensor_mass(std::max(1, panels / 2));
    est.error = std::abs(est.mass - coarse);
    return est;
}

}  // namespace zpgd
