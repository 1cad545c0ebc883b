#include "zpgd/numerics.hpp"

#include "zpgd/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace zpgd::num {

double sphere_measure(int n)
{
    switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * pi;
    case 3: return 4.0 * pi;
    default: throw DomainError(fmt::format("sphere_measure: unsupported dimension {}", n));
    }
}

QuadratureNodes panel_nodes(double a, double b, int panels)
{
    using rule = boost::math::quadrature::gauss<double, 10>;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    QuadratureNodes q;
    const double h = (b - a) / panels, half = 0.5 * h;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (x[k] == 0.0) {
                q.x.push_back(c);
                q.w.push_back(w[k] * half);
                continue;
            }
            q.x.push_back(c - half * x[k]);
            q.w.push_back(w[k] * half);
            q.x.push_back(c + half * x[k]);
            q.w.push_back(w[k] * half);
        }
    }
    return q;
}

QuadratureNodes panel_nodes(double a, double b, int panels, std::span<const double> breaks)
{
    std::vector<double> cuts{a};
    for (double x : breaks)
        if (x > a && x < b) cuts.push_back(x);
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.push_back(b);
    QuadratureNodes q;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        if (!(len > 0.0)) continue;
        const int k = std::max(1, static_cast<int>(std::ceil(panels * len / (b - a))));
        auto part = panel_nodes(cuts[i], cuts[i + 1], k);
        q.x.insert(q.x.end(), part.x.begin(), part.x.end());
        q.w.insert(q.w.end(), part.w.begin(), part.w.end());
    }
    return q;
}

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> xs, int order)
{
    const int n = static_cast<int>(xs.size());
    std::vector<std::vector<double>> c(order + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0, c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

double stencil_derivative(std::span<const double> x, std::span<const double> f, std::size_t i, int d, int width)
{
    const std::size_t n = x.size();
    const std::size_t w = std::min<std::size_t>(width, n);
    std::size_t start = i >= w / 2 ? i - w / 2 : 0;
    if (start + w > n) start = n - w;
    const auto weights = fornberg_weights(x[i], x.subspan(start, w), d);
    double v = 0.0;
    for (std::size_t j = 0; j < w; ++j) v += weights[d][j] * f[start + j];
    return v;
}

double bisect(const std::function<double(double)>& f, double a, double b)
{
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0)) throw NumericalError("bisect: no sign change in bracket");
    for (int it = 0; it < 400; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= std::min(a, b) || m >= std::max(a, b)) break;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    return std::abs(fa) <= std::abs(fb) ? a : b;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
    const OdeRhs& rhs;
    std::size_t n;
    std::vector<double> k1, k2, k3, k4, k5, k6, k7, tmp;

    Stepper(const OdeRhs& f, std::size_t dim)
        : rhs(f), n(dim), k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), tmp(dim)
    {
    }

    // One step from (s, y) with size h; k1 must hold f(s, y). Writes y_new, returns error norm.
    double step(double s, const std::vector<double>& y, double h, std::vector<double>& y_new, const OdeOptions& o)
    {
        auto stage = [&](std::vector<double>& out, double cs, auto&& combine) {
            for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * combine(i);
            rhs(s + cs * h, tmp, out);
        };
        stage(k2, c2, [&](std::size_t i) { return a21 * k1[i]; });
        stage(k3, c3, [&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
        stage(k4, c4, [&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; });
        stage(k5, c5, [&](std::size_t i) { return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]; });
        stage(k6, 1.0, [&](std::size_t i) {
            return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
        });
        y_new.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(s + h, y_new, k7);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = o.atol + o.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(e) / sc);
        }
        return err;
    }
};

}  // namespace

OdeResult integrate_ode(const OdeRhs& rhs, double s0, double s1, std::vector<double> y, const OdeOptions& o,
                        const OdeEvent& event)
{
    OdeResult res;
    const double dir = s1 >= s0 ? 1.0 : -1.0;
    const double span = std::abs(s1 - s0);
    double s = s0;
    double h = std::min(o.h_initial, span);
    Stepper st(rhs, y.size());
    std::vector<double> y_new;

    if (span == 0.0) {
        res.s = s;
        res.y = std::move(y);
        return res;
    }
    rhs(s, y, st.k1);

    while (dir * (s1 - s) > 0.0) {
        if (++res.steps > o.max_steps)
            throw NumericalError(fmt::format("ode: step budget exhausted at s = {}", s));
        const double remaining = std::abs(s1 - s);
        const bool last = h >= remaining;
        const double hh = last ? remaining : h;
        const double err = st.step(s, y, dir * hh, y_new, o);
        if (!std::isfinite(err) || err > 1.0) {
            const double shrink = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
            h = hh * shrink;
            if (h < o.h_min) throw NumericalError(fmt::format("ode: step size underflow at s = {}", s));
            continue;
        }
        double s_new = last ? s1 : s + dir * hh;

        if (event && event(s_new, y_new) <= 0.0) {
            // Bisect on the step length until the crossing is located.
            double lo = 0.0, hi = hh;
            std::vector<double> y_try;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                st.step(s, y, dir * mid, y_try, o);
                const double g = event(s + dir * mid, y_try);
                if (g <= 0.0) {
                    hi = mid;
                    y_new = y_try;
                    if (g > -o.event_tol) break;
                } else {
                    lo = mid;
                    if (g < o.event_tol) {
                        hi = mid;
                        y_new = y_try;
                        break;
                    }
                }
                if (hi - lo < 1e-15 * std::max(1.0, std::abs(s))) break;
            }
            res.s = s + dir * hi;
            res.y = y_new;
            res.event = true;
            return res;
        }

        s = s_new;
        y.swap(y_new);
        st.k1 = st.k7;
        const double grow = err > 0.0 ? std::min(5.0, 0.9 * std::pow(err, -0.2)) : 5.0;
        h = hh * grow;
    }
    res.s = s1;
    res.y = std::move(y);
    return res;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body)
{
    const std::size_t workers = std::clamp<std::size_t>(threads > 0 ? threads : 1, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n && !failed; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

int default_threads()
{
    if (const char* env = std::getenv("ZPGD_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

}  // namespace zpgd::num
