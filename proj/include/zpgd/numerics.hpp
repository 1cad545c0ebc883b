#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace zpgd::num {

constexpr double pi = 3.14159265358979323846;

/// Surface measure of the unit sphere S^{n-1} in R^n (2 for n = 1).
double sphere_measure(int n);

/// Composite Gauss-Legendre rule (10 nodes per panel) on [a, b].
template <class F>
double integrate_panels(F&& f, double a, double b, int panels)
{
    using rule = boost::math::quadrature::gauss<double, 10>;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h, half = 0.5 * h;
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k)
            s += x[k] == 0.0 ? w[k] * f(c) : w[k] * (f(c - half * x[k]) + f(c + half * x[k]));
        total += s * half;
    }
    return total;
}

/// Composite Gauss-Legendre nodes and weights on [a, b].
struct QuadratureNodes {
    std::vector<double> x;
    std::vector<double> w;
};
QuadratureNodes panel_nodes(double a, double b, int panels);
/// Same, with panel edges forced at the given interior points (panels shared out by length).
QuadratureNodes panel_nodes(double a, double b, int panels, std::span<const double> breaks);

/// Finite-difference weights (Fornberg) for derivatives 0..order at x0 from nodes xs.
/// Returns weights[d][j].
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> xs, int order);

/// d-th derivative of samples f on grid x at index i with a width-point stencil,
/// centred where possible and one-sided near the ends.
double stencil_derivative(std::span<const double> x, std::span<const double> f, std::size_t i, int d, int width);

/// Root of f in [a, b] by bisection to full double resolution; requires a sign change.
double bisect(const std::function<double(double)>& f, double a, double b);

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_initial = 1e-3;
    double h_min = 1e-14;
    int max_steps = 200000;
    double event_tol = 1e-10;
};

struct OdeResult {
    double s = 0.0;            // where integration stopped
    std::vector<double> y;     // state there
    bool event = false;        // stopped by the event function
    int steps = 0;
};

using OdeRhs = std::function<void(double s, std::span<const double> y, std::span<double> dy)>;
/// Event function; integration stops where it first becomes <= 0.
using OdeEvent = std::function<double(double s, std::span<const double> y)>;

/**
 * Adaptive Dormand-Prince 5(4) integration from s0 to s1 (either direction).
 * With an event function, the step that crosses zero is repeated with a
 * bisected step size until the event value is within event_tol.
 * Throws NumericalError on step underflow, reporting the last reached s.
 */
OdeResult integrate_ode(const OdeRhs& rhs, double s0, double s1, std::vector<double> y0,
                        const OdeOptions& opts = {}, const OdeEvent& event = {});

/// Runs body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

/// Thread count from the ZPGD_THREADS environment variable, else 1.
int default_threads();

}  // namespace zpgd::num
