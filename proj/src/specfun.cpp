#include "zpgd/specfun.hpp"

#include "zpgd/errors.hpp"
#include "zpgd/numerics.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace zpgd {

double bessel(BesselKind kind, int order, double x)
{
    if (order != 0 && order != 1) throw DomainError("bessel: only orders 0 and 1 are supported");
    if (kind == BesselKind::J) {
        if (x < 0.0) throw DomainError("bessel: J requires x >= 0");
        return boost::math::cyl_bessel_j(order, x);
    }
    if (!(x > 0.0)) throw DomainError(fmt::format("bessel: Y requires x > 0 (got {})", x));
    return boost::math::cyl_neumann(order, x);
}

double bessel_i(int order, double x)
{
    if (x < 0.0) throw DomainError("bessel_i: x must be >= 0");
    return boost::math::cyl_bessel_i(order, x);
}

double bessel_k(int order, double x)
{
    if (!(x > 0.0)) throw DomainError("bessel_k: x must be > 0");
    return boost::math::cyl_bessel_k(order, x);
}

std::string_view to_string(GreenCase c)
{
    switch (c) {
    case GreenCase::Ball2D: return "Ball2D";
    case GreenCase::Ball3D: return "Ball3D";
    case GreenCase::Annulus2D: return "Annulus2D";
    case GreenCase::Annulus3D: return "Annulus3D";
    }
    return "?";
}

GreenCase green_case_from_string(std::string_view s)
{
    for (auto c : {GreenCase::Ball2D, GreenCase::Ball3D, GreenCase::Annulus2D, GreenCase::Annulus3D})
        if (to_string(c) == s) return c;
    throw DataError(fmt::format("unknown domain case '{}'", s));
}

int dimension_of(GreenCase c) { return (c == GreenCase::Ball2D || c == GreenCase::Annulus2D) ? 2 : 3; }

bool is_ball(GreenCase c) { return c == GreenCase::Ball2D || c == GreenCase::Ball3D; }

EigenProblem EigenProblem::ball(GreenCase kind, double R, double q_B, double epsilon)
{
    EigenProblem p;
    p.kind = kind;
    p.R = R;
    p.k = q_B / epsilon;
    p.validate();
    return p;
}

EigenProblem EigenProblem::annulus(GreenCase kind, double R1, double R2, double q1, double q2, double epsilon)
{
    EigenProblem p;
    p.kind = kind;
    p.R1 = R1;
    p.R2 = R2;
    p.k1 = q1 / epsilon;
    p.k2 = q2 / epsilon;
    p.validate();
    return p;
}

void EigenProblem::validate() const
{
    if (is_ball(kind)) {
        if (!(R > 0.0) || !std::isfinite(R)) throw DataError("eigen problem: R must be positive");
        if (!std::isfinite(k)) throw DataError("eigen problem: boundary coefficient must be finite");
    } else {
        if (!(R1 > 0.0) || !(R2 > R1) || !std::isfinite(R2))
            throw DataError("eigen problem: annulus needs R2 > R1 > 0");
        if (!std::isfinite(k1) || !std::isfinite(k2))
            throw DataError("eigen problem: boundary coefficients must be finite");
    }
}

double EigenProblem::root_spacing() const { return is_ball(kind) ? num::pi : num::pi / (R2 - R1); }

bool EigenProblem::has_zero_mode() const { return is_ball(kind) ? k == 0.0 : (k1 == 0.0 && k2 == 0.0); }

namespace {

using boost::math::cyl_bessel_j;
using boost::math::cyl_neumann;

double annulus2d(const EigenProblem& p, double l)
{
    const double a1 = l * p.R1, a2 = l * p.R2;
    const double inner_j = -p.k1 * cyl_bessel_j(0, a1) + l * cyl_bessel_j(1, a1);
    const double inner_y = -p.k1 * cyl_neumann(0, a1) + l * cyl_neumann(1, a1);
    const double outer_j = p.k2 * cyl_bessel_j(0, a2) - l * cyl_bessel_j(1, a2);
    const double outer_y = p.k2 * cyl_neumann(0, a2) - l * cyl_neumann(1, a2);
    return inner_j * outer_y - outer_j * inner_y;
}

double annulus3d(const EigenProblem& p, double l)
{
    const double L = p.R2 - p.R1, b1 = p.b1(), b2 = p.b2();
    return (b1 * b2 - p.R1 * p.R2 * l * l) * std::sin(l * L) + l * (p.R1 * b2 + p.R2 * b1) * std::cos(l * L);
}

}  // namespace

std::optional<double> characteristic_value(const EigenProblem& p, double mu)
{
    if (!(mu > 0.0)) throw DomainError("characteristic_value: mu must be positive");
    switch (p.kind) {
    case GreenCase::Ball2D: return mu * cyl_bessel_j(1, mu) - p.k * p.R * cyl_bessel_j(0, mu);
    case GreenCase::Ball3D: {
        const double s = std::sin(mu);
        // sin of the double nearest k pi is rounding noise of size k pi * 2^-53
        if (std::abs(s) < 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, mu)) return std::nullopt;
        return mu * std::cos(mu) / s + p.k * p.R - 1.0;
    }
    case GreenCase::Annulus2D: return annulus2d(p, mu);
    case GreenCase::Annulus3D: return annulus3d(p, mu);
    }
    return std::nullopt;
}

double scan_value(const EigenProblem& p, double mu)
{
    if (p.kind == GreenCase::Ball3D) return mu * std::cos(mu) + (p.k * p.R - 1.0) * std::sin(mu);
    return *characteristic_value(p, mu);
}

double hyperbolic_value(const EigenProblem& p, double x)
{
    switch (p.kind) {
    case GreenCase::Ball2D:
        // kappa I1 + kR I0, divided by I0.
        return x * bessel_i(1, x) / bessel_i(0, x) + p.k * p.R;
    case GreenCase::Ball3D: {
        const double e = std::exp(-2.0 * x);
        return x * 0.5 * (1.0 + e) + (p.k * p.R - 1.0) * 0.5 * (1.0 - e);
    }
    case GreenCase::Annulus2D: {
        const double a1 = x * p.R1, a2 = x * p.R2, L = p.R2 - p.R1;
        const double A = -x * bessel_k(1, a1) + p.k1 * bessel_k(0, a1);
        const double B = -(x * bessel_i(1, a1) + p.k1 * bessel_i(0, a1));
        const double v = A * (x * bessel_i(1, a2) + p.k2 * bessel_i(0, a2))
                       + B * (-x * bessel_k(1, a2) + p.k2 * bessel_k(0, a2));
        return v * std::exp(-x * L);
    }
    case GreenCase::Annulus3D: {
        const double L = p.R2 - p.R1, b1 = p.b1(), b2 = p.b2();
        const double e = std::exp(-2.0 * x * L);
        return (b1 * b2 + p.R1 * p.R2 * x * x) * 0.5 * (1.0 - e) + x * (p.R2 * b1 + p.R1 * b2) * 0.5 * (1.0 + e);
    }
    }
    return 0.0;
}

EigenvalueList find_eigenvalues(const EigenProblem& p, int count, const ScanOptions& opts)
{
    if (count < 1) throw DomainError("find_eigenvalues: count must be >= 1");
    p.validate();
    const double spacing = p.root_spacing();
    const double step = opts.step > 0.0 ? opts.step : spacing / 40.0;
    const double limit = opts.max_value > 0.0 ? opts.max_value : (count + 20) * spacing * 4.0;
    const auto f = [&](double mu) { return scan_value(p, mu); };

    EigenvalueList out;
    double a = 1e-9 * spacing, fa = f(a);
    for (long i = 1; static_cast<int>(out.values.size()) < count; ++i) {
        const double b = i * step;
        if (b > limit)
            throw NumericalError(fmt::format("insufficient scan range: found {} of {} roots below {}",
                                             out.values.size(), count, limit));
        const double fb = f(b);
        if (fb == 0.0 || (fa < 0.0) != (fb < 0.0)) {
            const double root = fb == 0.0 ? b : num::bisect(f, a, b);
            if (out.values.empty() || root > out.values.back()) {
                out.values.push_back(root);
                out.residuals.push_back(f(root));
            }
        }
        a = b;
        fa = fb;
    }
    return out;
}

std::vector<double> find_growing_modes(const EigenProblem& p)
{
    p.validate();
    double kmax;
    if (is_ball(p.kind)) {
        kmax = 2.0 * std::abs(p.k * p.R) + 10.0;
    } else {
        const double L = p.R2 - p.R1;
        kmax = 2.0 * (std::abs(p.k1) + std::abs(p.k2)) + 2.0 / p.R1 + 2.0 / p.R2 + 20.0 / L;
    }
    const double xmax = is_ball(p.kind) ? kmax : kmax * p.R2;
    if (xmax > 650.0) throw DataError("growing modes: boundary inflow too strong for Bessel range");

    const auto f = [&](double x) { return hyperbolic_value(p, x); };
    std::vector<double> roots;
    const int n = 4000;
    double a = 1e-9 * kmax, fa = f(a);
    for (int i = 1; i <= n; ++i) {
        const double b = kmax * i / n, fb = f(b);
        if (fb == 0.0 || (fa < 0.0) != (fb < 0.0)) roots.push_back(fb == 0.0 ? b : num::bisect(f, a, b));
        a = b;
        fa = fb;
    }
    return roots;
}

}  // namespace zpgd
