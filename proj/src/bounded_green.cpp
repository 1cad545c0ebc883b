#include "zpgd/bounded_green.hpp"

#include "zpgd/errors.hpp"
#include "zpgd/numerics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace zpgd {

namespace {

constexpr double kCornerTol = 1e-8;

bool close(double a, double b) { return std::abs(a - b) <= kCornerTol * (1.0 + std::abs(a) + std::abs(b)); }

// sin(x)/x and (x cos x - sin x)/x^2, with their hyperbolic twins.
double sinc(double x) { return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }
double sinhc(double x) { return std::abs(x) < 1e-4 ? 1.0 + x * x / 6.0 : std::sinh(x) / x; }
double dsinc(double x)
{
    if (std::abs(x) < 0.1) {
        const double x2 = x * x;
        return x * (-1.0 / 3 + x2 * (1.0 / 30 + x2 * (-1.0 / 840 + x2 / 45360)));
    }
    return (x * std::cos(x) - std::sin(x)) / (x * x);
}
double dsinhc(double x)
{
    if (std::abs(x) < 0.1) {
        const double x2 = x * x;
        return x * (1.0 / 3 + x2 * (1.0 / 30 + x2 * (1.0 / 840 + x2 / 45360)));
    }
    return (x * std::cosh(x) - std::sinh(x)) / (x * x);
}

struct PhiValue {
    double v, d;
};

// Unscaled eigenfunction and derivative.
PhiValue raw_phi(const EigenProblem& p, const Mode& m, double r)
{
    if (m.kind == ModeKind::Zero) return {1.0, 0.0};
    const double w = m.wave, x = w * r;
    const bool grow = m.kind == ModeKind::Growing;
    switch (p.kind) {
    case GreenCase::Ball2D:
        if (grow) return {bessel_i(0, x), w * bessel_i(1, x)};
        return {bessel(BesselKind::J, 0, x), -w * bessel(BesselKind::J, 1, x)};
    case GreenCase::Ball3D:
        if (grow) return {w * sinhc(x), w * w * dsinhc(x)};
        return {w * sinc(x), w * w * dsinc(x)};
    case GreenCase::Annulus2D:
        if (grow) return {m.A * bessel_i(0, x) + m.B * bessel_k(0, x), w * (m.A * bessel_i(1, x) - m.B * bessel_k(1, x))};
        return {m.A * bessel(BesselKind::J, 0, x) + m.B * bessel(BesselKind::Y, 0, x),
                -w * (m.A * bessel(BesselKind::J, 1, x) + m.B * bessel(BesselKind::Y, 1, x))};
    case GreenCase::Annulus3D: {
        const double z = w * (r - p.R1), b1 = p.b1();
        double psi, dpsi;
        if (grow) {
            psi = b1 * std::sinh(z) + p.R1 * w * std::cosh(z);
            dpsi = w * b1 * std::cosh(z) + p.R1 * w * w * std::sinh(z);
        } else {
            psi = b1 * std::sin(z) + p.R1 * w * std::cos(z);
            dpsi = w * b1 * std::cos(z) - p.R1 * w * w * std::sin(z);
        }
        return {psi / r, dpsi / r - psi / (r * r)};
    }
    }
    return {0.0, 0.0};
}

double r_in(const EigenProblem& p) { return is_ball(p.kind) ? 0.0 : p.R1; }
double r_out(const EigenProblem& p) { return is_ball(p.kind) ? p.R : p.R2; }

// c = 1 / int phi^2 r^(n-1) dr and sup |phi| by quadrature on the scaled eigenfunction.
void normalise_numerically(const EigenProblem& p, Mode& m, int n)
{
    const double a = r_in(p), b = r_out(p);
    const int panels = std::max(8, static_cast<int>(std::ceil((b - a) * std::abs(m.wave))) + 8);
    const auto f = [&](double r) {
        const double v = raw_phi(p, m, r).v / m.scale;
        return v * v * std::pow(r, n - 1);
    };
    m.c = 1.0 / num::integrate_panels(f, a, b, panels);
    double sup = 0.0;
    for (int i = 0; i <= 16 * panels; ++i) sup = std::max(sup, std::abs(raw_phi(p, m, a + (b - a) * i / (16.0 * panels)).v));
    m.sup = 1.05 * sup / m.scale;
}

Mode oscillatory_mode(const EigenProblem& p, double root, int n)
{
    Mode m;
    m.kind = ModeKind::Oscillatory;
    m.root = root;
    switch (p.kind) {
    case GreenCase::Ball2D: {
        m.wave = root / p.R;
        const double kR = p.k * p.R, j0 = bessel(BesselKind::J, 0, root);
        m.c = 2.0 * root * root / (p.R * p.R * (kR * kR + root * root) * j0 * j0);
        m.sup = 1.0;
        break;
    }
    case GreenCase::Ball3D: {
        m.wave = root / p.R;
        const double h = p.k * p.R - 1.0, s = root * root + h * h;
        m.c = 2.0 / p.R * s / (s + h);
        m.sup = m.wave;
        break;
    }
    case GreenCase::Annulus2D: {
        const double l = root, a1 = l * p.R1, a2 = l * p.R2;
        m.wave = l;
        const double inner_j = -p.k1 * bessel(BesselKind::J, 0, a1) + l * bessel(BesselKind::J, 1, a1);
        const double inner_y = -p.k1 * bessel(BesselKind::Y, 0, a1) + l * bessel(BesselKind::Y, 1, a1);
        const double outer_j = p.k2 * bessel(BesselKind::J, 0, a2) - l * bessel(BesselKind::J, 1, a2);
        m.A = inner_y;
        m.B = -inner_j;
        const double Bn = (l * l + p.k2 * p.k2) * inner_j * inner_j - (l * l + p.k1 * p.k1) * outer_j * outer_j;
        m.c = num::pi * num::pi / 2.0 * l * l * outer_j * outer_j / Bn;
        double sup = 0.0;
        for (int i = 0; i <= 400; ++i) sup = std::max(sup, std::abs(raw_phi(p, m, p.R1 + (p.R2 - p.R1) * i / 400.0).v));
        m.sup = 1.1 * sup;
        break;
    }
    case GreenCase::Annulus3D: {
        const double l = root, L = p.R2 - p.R1, b1 = p.b1(), b2 = p.b2();
        m.wave = l;
        const double D = L * (b1 * b1 + p.R1 * p.R1 * l * l) * (b2 * b2 + p.R2 * p.R2 * l * l)
                       + (b1 * p.R2 + b2 * p.R1) * (b1 * b2 + p.R1 * p.R2 * l * l);
        m.c = 2.0 * (b2 * b2 + p.R2 * p.R2 * l * l) / D;
        m.sup = (std::abs(b1) + p.R1 * l) / p.R1;
        break;
    }
    }
    m.sigma = m.wave * m.wave;
    if (!(m.c > 0.0) || !std::isfinite(m.c)) normalise_numerically(p, m, n);
    return m;
}

Mode growing_mode(const EigenProblem& p, double kappa, int n)
{
    Mode m;
    m.kind = ModeKind::Growing;
    m.root = kappa;
    m.wave = is_ball(p.kind) ? kappa / p.R : kappa;
    m.sigma = -m.wave * m.wave;
    if (p.kind == GreenCase::Annulus2D) {
        const double a1 = kappa * p.R1;
        m.A = -kappa * bessel_k(1, a1) + p.k1 * bessel_k(0, a1);
        m.B = -(kappa * bessel_i(1, a1) + p.k1 * bessel_i(0, a1));
    }
    const double lo = is_ball(p.kind) ? 0.0 : p.R1;
    m.scale = std::max(std::abs(raw_phi(p, m, lo).v), std::abs(raw_phi(p, m, r_out(p)).v));
    normalise_numerically(p, m, n);
    return m;
}

}  // namespace

BoundedProblem BoundedProblem::ball(GreenCase kind, double R, double epsilon, ScalarProfile q0, ScalarProfile rho0,
                                    double q_B, std::optional<ScalarProfile> rho_B)
{
    if (!is_ball(kind)) throw DataError("bounded problem: ball() needs Ball2D or Ball3D");
    BoundedProblem p;
    p.kind = kind;
    p.R = R;
    p.epsilon = epsilon;
    p.q0 = std::move(q0);
    p.rho0 = std::move(rho0);
    p.q_B = q_B;
    p.rho_B = std::move(rho_B);
    p.validate();
    return p;
}

BoundedProblem BoundedProblem::annulus(GreenCase kind, double R1, double R2, double epsilon, ScalarProfile q0,
                                       ScalarProfile rho0, double q1, double q2, std::optional<ScalarProfile> rho1,
                                       std::optional<ScalarProfile> rho2)
{
    if (is_ball(kind)) throw DataError("bounded problem: annulus() needs Annulus2D or Annulus3D");
    BoundedProblem p;
    p.kind = kind;
    p.R1 = R1;
    p.R2 = R2;
    p.epsilon = epsilon;
    p.q0 = std::move(q0);
    p.rho0 = std::move(rho0);
    p.q1 = q1;
    p.q2 = q2;
    p.rho1 = std::move(rho1);
    p.rho2 = std::move(rho2);
    p.validate();
    return p;
}

EigenProblem BoundedProblem::eigen_problem() const
{
    return is_ball(kind) ? EigenProblem::ball(kind, R, q_B, epsilon) : EigenProblem::annulus(kind, R1, R2, q1, q2, epsilon);
}

void BoundedProblem::validate() const
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DataError("bounded problem: epsilon must be positive");
    eigen_problem().validate();

    const auto check_boundary = [&](const char* name, double r, double q, bool inflow,
                                    const std::optional<ScalarProfile>& rho) {
        if (!close(q0(r), q))
            throw DataError(fmt::format("bounded problem: q0({}) = {} does not match boundary velocity {} = {}", r,
                                        q0(r), name, q));
        if (inflow && !rho)
            throw DataError(fmt::format("bounded problem: boundary density at r = {} is required ({} lets mass in)",
                                        r, name));
        if (!inflow && rho)
            throw DataError(fmt::format("bounded problem: boundary density at r = {} must not be given ({} is not inflow)",
                                        r, name));
        if (rho && !close((*rho)(0.0), rho0(r)))
            throw DataError(fmt::format("bounded problem: boundary density {} at t = 0 does not match rho0({}) = {}",
                                        (*rho)(0.0), r, rho0(r)));
    };
    if (is_ball(kind)) {
        check_boundary("q_B", R, q_B, q_B < 0.0, rho_B);
        if (rho1 || rho2) throw DataError("bounded problem: rho1/rho2 apply to the annulus only");
    } else {
        check_boundary("q1", R1, q1, q1 > 0.0, rho1);
        check_boundary("q2", R2, q2, q2 < 0.0, rho2);
        if (rho_B) throw DataError("bounded problem: rho_B applies to the ball only");
    }
}

GreenEvaluator::GreenEvaluator(const EigenProblem& problem, double epsilon, const GreenOptions& opts)
    : problem_(problem), epsilon_(epsilon), n_(dimension_of(problem.kind))
{
    problem_.validate();
    if (!(epsilon > 0.0)) throw DataError("green: epsilon must be positive");
    const double ell = r_out(problem_) - r_in(problem_);
    t_min_ = opts.t_min > 0.0 ? opts.t_min : 1e-3 * 2.0 * ell * ell / epsilon;

    std::vector<Mode> extra;
    if (problem_.has_zero_mode()) {
        Mode z;
        z.kind = ModeKind::Zero;
        const double a = r_in(problem_), b = r_out(problem_);
        z.c = n_ / (std::pow(b, n_) - std::pow(a, n_));
        extra.push_back(z);
    }
    for (double kappa : find_growing_modes(problem_)) extra.push_back(growing_mode(problem_, kappa, n_));

    const double lscale = std::pow(ell, n_ - 1);
    const auto term_bound = [&](const Mode& m) {
        return m.c * m.sup * m.sup * lscale * std::exp(-0.5 * epsilon_ * m.sigma * t_min_);
    };
    int count = std::max(32, opts.min_terms);
    for (;;) {
        roots_ = find_eigenvalues(problem_, count);
        modes_ = extra;
        for (double mu : roots_.values) modes_.push_back(oscillatory_mode(problem_, mu, n_));
        double ref = 0.0;
        for (const auto& m : modes_) ref = std::max(ref, term_bound(m));
        if (term_bound(modes_.back()) < opts.tail_tolerance * ref) break;
        if (count >= 8192) throw NumericalError("green: series truncation did not converge at t_min");
        count *= 2;
    }
    truncation_ = count;
    std::sort(modes_.begin(), modes_.end(), [](const Mode& a, const Mode& b) { return a.sigma < b.sigma; });
}

double GreenEvaluator::phi(std::size_t i, double r) const
{
    const Mode& m = modes_.at(i);
    return raw_phi(problem_, m, r).v / m.scale;
}

double GreenEvaluator::dphi(std::size_t i, double r) const
{
    const Mode& m = modes_.at(i);
    return raw_phi(problem_, m, r).d / m.scale;
}

double GreenEvaluator::d2phi(std::size_t i, double r) const
{
    const Mode& m = modes_.at(i);
    const auto v = raw_phi(problem_, m, r);
    if (r < 1e-12) return -m.sigma * v.v / n_ / m.scale;  // ball centre
    return (-m.sigma * v.v - (n_ - 1) / r * v.d) / m.scale;
}

namespace {

void check_green_args(const GreenEvaluator& g, double r, double xi, double t)
{
    if (!(t > 0.0)) throw DomainError(fmt::format("green: t must be positive (got {})", t));
    if (t < g.t_min() * (1.0 - 1e-12))
        throw DomainError(fmt::format("green: t = {} is below the resolved series floor {}", t, g.t_min()));
    const double a = r_in(g.problem()), b = r_out(g.problem());
    if (r < a || r > b || xi < a || xi > b) throw DomainError("green: r and xi must lie in the domain");
}

}  // namespace

double GreenEvaluator::green(double r, double xi, double t) const
{
    check_green_args(*this, r, xi, t);
    double s = 0.0;
    for (std::size_t i = 0; i < modes_.size(); ++i)
        s += modes_[i].c * phi(i, r) * phi(i, xi) * std::exp(-0.5 * epsilon_ * modes_[i].sigma * t);
    return s * std::pow(xi, n_ - 1);
}

double GreenEvaluator::green_dr(double r, double xi, double t) const
{
    check_green_args(*this, r, xi, t);
    double s = 0.0;
    for (std::size_t i = 0; i < modes_.size(); ++i)
        s += modes_[i].c * dphi(i, r) * phi(i, xi) * std::exp(-0.5 * epsilon_ * modes_[i].sigma * t);
    return s * std::pow(xi, n_ - 1);
}

BoundedSolution::BoundedSolution(BoundedProblem problem, const GreenOptions& opts) : problem_(std::move(problem))
{
    problem_.validate();
    green_ = std::make_unique<GreenEvaluator>(problem_.eigen_problem(), problem_.epsilon, opts);
    const int n = problem_.dimension();
    const double a = problem_.r_inner(), b = problem_.r_outer(), eps = problem_.epsilon;
    const auto& modes = green_->modes();

    // Panel ceiling: the fastest retained mode and the decay scale of the initial weight.
    double wmax = 1.0 / (b - a);
    for (const auto& m : modes) wmax = std::max(wmax, std::abs(m.wave));
    const double qmax = problem_.q0.sup_abs(a, b);
    const double h = std::min({1.0 / wmax, 2.0 * eps / std::max(qmax, 1e-300), (b - a) / 16.0});

    std::vector<double> cuts{a};
    for (double br : problem_.q0.breaks())
        if (br > a && br < b) cuts.push_back(br);
    cuts.push_back(b);
    std::vector<double> xs, ws;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const int panels = std::max(1, static_cast<int>(std::ceil((cuts[s + 1] - cuts[s]) / h)));
        auto q = num::panel_nodes(cuts[s], cuts[s + 1], panels);
        xs.insert(xs.end(), q.x.begin(), q.x.end());
        ws.insert(ws.end(), q.w.begin(), q.w.end());
    }
    std::vector<double> expo(xs.size());
    double emax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        expo[i] = -problem_.q0.integral(a, xs[i]) / eps;
        emax = std::max(emax, expo[i]);
    }
    log_shift_ = emax;

    W_.assign(modes.size(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double weight = ws[i] * std::exp(expo[i] - emax) * std::pow(xs[i], n - 1);
        for (std::size_t m = 0; m < modes.size(); ++m) W_[m] += weight * green_->phi(m, xs[i]);
    }
    bound_suffix_.assign(modes.size() + 1, 0.0);
    for (std::size_t m = modes.size(); m-- > 0;)
        bound_suffix_[m] = std::max(bound_suffix_[m + 1], std::abs(modes[m].c * W_[m]) * modes[m].sup);
}

BoundedSolution::Sums BoundedSolution::scaled_sums(double r, double t) const
{
    const auto& modes = green_->modes();
    const double eps = problem_.epsilon, s0 = modes.front().sigma;
    Sums s{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const double f = std::exp(-0.5 * eps * (modes[i].sigma - s0) * t);
        if (i > 0 && bound_suffix_[i] * f < 1e-17 * std::abs(s.a)) break;
        const double cw = modes[i].c * W_[i] * f;
        s.a += cw * green_->phi(i, r);
        s.a_r += cw * green_->dphi(i, r);
        s.a_rr += cw * green_->d2phi(i, r);
    }
    return s;
}

namespace {

void check_radius(const BoundedProblem& p, double r)
{
    const double a = p.r_inner(), b = p.r_outer(), tol = 1e-12 * b;
    if (r < a - tol || r > b + tol)
        throw DomainError(fmt::format("bounded solution: r = {} outside [{}, {}]", r, a, b));
}

}  // namespace

BoundedSolution::Heat BoundedSolution::heat(double r, double t) const
{
    check_radius(problem_, r);
    if (t < t_floor() * (1.0 - 1e-12))
        throw DomainError(fmt::format("bounded solution: t = {} below the series floor {}", t, t_floor()));
    const auto s = scaled_sums(r, t);
    const double f = std::exp(-0.5 * problem_.epsilon * green_->modes().front().sigma * t);
    return {s.a * f, s.a_r * f, s.a_rr * f};
}

RadialVelocity BoundedSolution::velocity(double r, double t) const
{
    check_radius(problem_, r);
    r = std::clamp(r, problem_.r_inner(), problem_.r_outer());
    if (t < 0.0) throw DomainError("bounded solution: t must be >= 0");
    const double tf = t_floor();
    const auto series = [&](double tt) {
        const auto s = scaled_sums(r, tt);
        if (!(s.a > 0.0))
            throw NumericalError(fmt::format("bounded solution: nonpositive a at r = {}, t = {}; truncation too "
                                             "aggressive, retry with min_terms > {}",
                                             r, tt, green_->truncation_count()));
        const double ar = s.a_r / s.a;
        return RadialVelocity{-problem_.epsilon * ar, -problem_.epsilon * (s.a_rr / s.a - ar * ar)};
    };
    if (t >= tf) return series(t);
    const auto at_floor = series(tf);
    const double th = t / tf;
    return {(1.0 - th) * problem_.q0(r) + th * at_floor.q, (1.0 - th) * problem_.q0.derivative(r) + th * at_floor.q_r};
}

double BoundedSolution::density(double r, double t) const
{
    check_radius(problem_, r);
    if (t < 0.0) throw DomainError("bounded solution: t must be >= 0");
    const BoundedProblem& P = problem_;
    const int n = P.dimension();
    const double a = P.r_inner(), b = P.r_outer();
    r = std::clamp(r, a, b);
    if (t == 0.0) return P.rho0(r);

    const bool ball = is_ball(P.kind);
    const bool outer_inflow = ball ? P.q_B < 0.0 : P.q2 < 0.0;
    const bool inner_inflow = !ball && P.q1 > 0.0;
    const auto& outer_rho = ball ? P.rho_B : P.rho2;
    if (r == b && outer_inflow) return (*outer_rho)(t);
    if (!ball && r == a && inner_inflow) return (*P.rho1)(t);

    const bool centre = ball && r == 0.0;
    const num::OdeRhs rhs = [&](double s, std::span<const double> y, std::span<double> dy) {
        const auto v = velocity(std::clamp(y[0], a, b), s);
        dy[0] = centre ? 0.0 : v.q;
        dy[1] = v.q_r;
    };
    const double ell = b - a;
    // A small margin keeps characteristics that run along a q = 0 wall from triggering.
    const num::OdeEvent event = [&](double, std::span<const double> y) {
        return (ball ? b - y[0] : std::min(y[0] - a, b - y[0])) + 1e-12 * ell;
    };
    num::OdeOptions opts;
    opts.rtol = 1e-10;
    opts.atol = 1e-12 * ell;
    opts.h_initial = 1e-2 * t;
    opts.event_tol = 1e-10 * ell;
    const auto res = num::integrate_ode(rhs, t, 0.0, {r, 0.0}, opts, centre ? num::OdeEvent{} : event);

    double p_gamma;
    if (res.event) {
        const bool at_outer = std::abs(res.y[0] - b) <= std::abs(res.y[0] - a) || ball;
        const bool inflow = at_outer ? outer_inflow : inner_inflow;
        const double rb = at_outer ? b : a;
        if (!inflow)
            throw DataError(fmt::format("bounded solution: characteristic from (r={}, t={}) leaves through the "
                                        "outflow boundary r = {} at t = {}; no boundary density is defined there",
                                        r, t, rb, res.s));
        const ScalarProfile& rho_b = at_outer ? *outer_rho : *P.rho1;
        p_gamma = std::pow(rb, n - 1) * rho_b(res.s);
    } else {
        const double foot = std::clamp(res.y[0], a, b);
        if (centre) return P.rho0(0.0) * std::exp(n * res.y[1]);
        p_gamma = std::pow(foot, n - 1) * P.rho0(foot);
    }
    return p_gamma * std::exp(res.y[1]) / std::pow(r, n - 1);
}

double BoundedSolution::large_time_velocity(double r) const
{
    check_radius(problem_, r);
    const auto& m = green_->modes().front();
    if (m.kind == ModeKind::Zero) return 0.0;
    return -problem_.epsilon * green_->dphi(0, r) / green_->phi(0, r);
}

BoundedSolution::Mass BoundedSolution::mass(double t, int panels) const
{
    if (t < 0.0) throw DomainError("bounded solution: t must be >= 0");
    const BoundedProblem& P = problem_;
    const int n = P.dimension();
    const double a = P.r_inner(), b = P.r_outer();

    // Density is only piecewise smooth: split at the images of the data kinks and of inflow corners.
    std::vector<double> starts;
    for (const auto* prof : {&P.rho0, &P.q0})
        for (double br : prof->breaks())
            if (br > a && br < b) starts.push_back(br);
    const bool ball = is_ball(P.kind);
    if (ball ? P.q_B < 0.0 : P.q2 < 0.0) starts.push_back(b);
    if (!ball && P.q1 > 0.0) starts.push_back(a);

    std::vector<double> cuts{a, b};
    if (t > 0.0) {
        num::OdeOptions opts;
        opts.h_initial = 1e-2 * t;
        const num::OdeRhs rhs = [&](double s, std::span<const double> y, std::span<double> dy) {
            dy[0] = velocity(std::clamp(y[0], a, b), s).q;
        };
        const num::OdeEvent leave = [&](double, std::span<const double> y) {
            return std::min(y[0] - a, b - y[0]) + 1e-12 * b;
        };
        for (double x0 : starts) {
            const auto res = num::integrate_ode(rhs, 0.0, t, {x0}, opts, leave);
            if (!res.event && res.y[0] > a && res.y[0] < b) cuts.push_back(res.y[0]);
        }
    } else {
        cuts.insert(cuts.end(), starts.begin(), starts.end());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [&](double x, double y) { return y - x < 1e-12 * b; }),
               cuts.end());

    const auto integral = [&](int per) {
        double m = 0.0;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const int k = std::max(1, static_cast<int>(std::ceil(per * (cuts[s + 1] - cuts[s]) / (b - a))));
            m += num::integrate_panels([&](double r) { return std::pow(r, n - 1) * density(r, t); }, cuts[s],
                                       cuts[s + 1], k);
        }
        return num::sphere_measure(n) * m;
    };
    Mass out;
    out.mass = integral(panels);
    out.error = std::abs(out.mass - integral(std::max(1, panels / 2)));
    return out;
}

double BoundedSolution::mass_flux(double t) const
{
    const BoundedProblem& P = problem_;
    const int n = P.dimension();
    const double b = P.r_outer();
    const double q_out = is_ball(P.kind) ? P.q_B : P.q2;
    double flux = q_out * std::pow(b, n - 1) * density(b, t);
    if (!is_ball(P.kind)) flux -= P.q1 * std::pow(P.R1, n - 1) * density(P.R1, t);
    return -num::sphere_measure(n) * flux;
}

double BoundedSolution::robin_residual(double t) const
{
    const BoundedProblem& P = problem_;
    const auto at = [&](double r, double q) {
        const auto h = heat(r, t);
        return std::abs(P.epsilon * h.a_r + q * h.a) / std::abs(h.a);
    };
    if (is_ball(P.kind)) return at(P.R, P.q_B);
    return std::max(at(P.R1, P.q1), at(P.R2, P.q2));
}

RadialField BoundedSolution::sample(const std::vector<double>& r, const std::vector<double>& t, bool with_density,
                                    int threads) const
{
    RadialField f;
    f.n = problem_.dimension();
    f.epsilon = problem_.epsilon;
    f.r = r;
    f.t = t;
    f.q.assign(r.size() * t.size(), 0.0);
    f.p.assign(r.size() * t.size(), 0.0);
    num::parallel_for(r.size() * t.size(), threads, [&](std::size_t idx) {
        const std::size_t it = idx / r.size(), ir = idx % r.size();
        f.q[idx] = t[it] == 0.0 ? problem_.q0(r[ir]) : velocity(r[ir], t[it]).q;
        if (with_density) f.p[idx] = std::pow(r[ir], f.n - 1) * density(r[ir], t[it]);
    });
    f.validate();
    return f;
}

HopfColeState hopf_cole_boundary_state(const BoundedSolution& sol, const std::vector<double>& r,
                                       const std::vector<double>& t)
{
    HopfColeState s{r, t, std::vector<double>(r.size() * t.size())};
    for (std::size_t it = 0; it < t.size(); ++it)
        for (std::size_t ir = 0; ir < r.size(); ++ir) {
            const double a = sol.heat(r[ir], t[it]).a;
            if (!(a > 0.0))
                throw NumericalError(fmt::format("hopf-cole state: nonpositive a at r = {}, t = {}; retry with more "
                                                 "than {} terms",
                                                 r[ir], t[it], sol.evaluator().truncation_count()));
            s.a[it * r.size() + ir] = a;
        }
    return s;
}

void write_eigen_csv(std::ostream& os, const EigenvalueList& list)
{
    os << "index,value,residual\n";
    for (std::size_t i = 0; i < list.values.size(); ++i)
        os << fmt::format("{},{:.17g},{:.17g}\n", i + 1, list.values[i], list.residuals[i]);
}

}  // namespace zpgd
