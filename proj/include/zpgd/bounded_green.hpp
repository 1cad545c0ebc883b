#pragma once

#include "zpgd/profile.hpp"
#include "zpgd/radial_core.hpp"
#include "zpgd/specfun.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace zpgd {

/**
 * Radial adhesion problem in a ball (|x| < R) or an annulus (R1 < |x| < R2)
 * with constant boundary velocities. Boundary densities are needed only
 * where mass enters: q_B < 0 for the ball, q1 > 0 at R1 and q2 < 0 at R2.
 */
struct BoundedProblem {
    GreenCase kind = GreenCase::Ball2D;
    double R = 1.0;
    double R1 = 0.5, R2 = 1.0;
    double epsilon = 0.1;
    ScalarProfile q0;
    ScalarProfile rho0;
    double q_B = 0.0;
    double q1 = 0.0, q2 = 0.0;
    std::optional<ScalarProfile> rho_B;  // function of t
    std::optional<ScalarProfile> rho1, rho2;

    static BoundedProblem ball(GreenCase kind, double R, double epsilon, ScalarProfile q0, ScalarProfile rho0,
                               double q_B, std::optional<ScalarProfile> rho_B = std::nullopt);
    static BoundedProblem annulus(GreenCase kind, double R1, double R2, double epsilon, ScalarProfile q0,
                                  ScalarProfile rho0, double q1, double q2,
                                  std::optional<ScalarProfile> rho1 = std::nullopt,
                                  std::optional<ScalarProfile> rho2 = std::nullopt);

    int dimension() const { return dimension_of(kind); }
    double r_inner() const { return is_ball(kind) ? 0.0 : R1; }
    double r_outer() const { return is_ball(kind) ? R : R2; }
    /// Length scale of the domain (R or R2 - R1).
    double length() const { return r_outer() - r_inner(); }
    EigenProblem eigen_problem() const;

    /// Throws DataError on inconsistent corner data or a missing / superfluous boundary density.
    void validate() const;
};

enum class ModeKind { Oscillatory, Zero, Growing };

/// One term of the eigenfunction expansion, phi'' + (n-1)/r phi' = -sigma phi.
struct Mode {
    ModeKind kind = ModeKind::Oscillatory;
    double root = 0.0;   // mu (ball) or lambda (annulus) for oscillatory modes, kappa for growing ones
    double wave = 0.0;   // radial wavenumber: mu / R, lambda or kappa / R
    double sigma = 0.0;  // eigenvalue; negative for growing modes
    double c = 0.0;      // 1 / int phi^2 r^(n-1) dr
    double A = 0.0, B = 0.0;  // annulus-2D combination coefficients
    double scale = 1.0;       // phi is divided by this (keeps growing modes O(1))
    double sup = 1.0;         // sup |phi| over the domain
};

struct GreenOptions {
    /// Smallest time the truncated series must resolve; 0 selects 1e-3 * 2 L^2 / eps.
    double t_min = 0.0;
    /// Lower bound on the number of oscillatory terms.
    int min_terms = 0;
    /// Relative size of the last retained term at t_min.
    double tail_tolerance = 1e-14;
};

/**
 * Eigenfunction expansion of the Green's function of the radial heat
 * problem a_t = (eps/2)(a_rr + (n-1)/r a_r) with Robin data eps a_r + q a = 0.
 *
 *   G(r, xi, t) = sum_n c_n phi_n(r) phi_n(xi) xi^(n-1) exp(-eps sigma_n t / 2)
 *
 * Besides the positive roots of the characteristic equation the expansion
 * carries the constant mode (pure Neumann data) and the modes with negative
 * sigma that appear when the boundary lets mass in.
 */
class GreenEvaluator {
public:
    GreenEvaluator(const EigenProblem& problem, double epsilon, const GreenOptions& opts = {});

    const EigenProblem& problem() const { return problem_; }
    const std::vector<Mode>& modes() const { return modes_; }
    double epsilon() const { return epsilon_; }
    double t_min() const { return t_min_; }
    /// Number of oscillatory terms retained.
    int truncation_count() const { return truncation_; }
    /// Positive roots and characteristic residuals of the oscillatory modes.
    const EigenvalueList& eigenvalues() const { return roots_; }

    double phi(std::size_t i, double r) const;
    double dphi(std::size_t i, double r) const;
    /// phi'' from the ODE itself.
    double d2phi(std::size_t i, double r) const;

    /// Throws DomainError for t <= 0 and for t below the resolved floor t_min().
    double green(double r, double xi, double t) const;
    double green_dr(double r, double xi, double t) const;

private:
    EigenProblem problem_;
    double epsilon_;
    double t_min_;
    int truncation_ = 0;
    int n_ = 2;
    EigenvalueList roots_;
    std::vector<Mode> modes_;
};

/**
 * Assembled viscous solution of a BoundedProblem:
 *   a(r, t) = sum_n c_n W_n phi_n(r) exp(-eps sigma_n t / 2),  W_n = int phi_n a0 xi^(n-1) dxi,
 * with a0 = exp(-(1/eps) int q0) shifted by its minimum exponent.
 */
class BoundedSolution {
public:
    explicit BoundedSolution(BoundedProblem problem, const GreenOptions& opts = {});

    const BoundedProblem& problem() const { return problem_; }
    const GreenEvaluator& evaluator() const { return *green_; }
    const std::vector<double>& projections() const { return W_; }
    double log_shift() const { return log_shift_; }

    /// Series evaluations are valid for t >= t_floor(); velocity() interpolates below it.
    double t_floor() const { return green_->t_min(); }

    /// a and its first two r-derivatives, up to the constant factor exp(log_shift()). Needs t >= t_floor().
    struct Heat {
        double a = 0.0, a_r = 0.0, a_rr = 0.0;
    };
    Heat heat(double r, double t) const;

    /// q = -eps a_r / a and q_r. For 0 < t < t_floor() blends linearly in t from (q0, q0').
    RadialVelocity velocity(double r, double t) const;

    /// rho(r, t) by the backward characteristic. Throws DataError when it exits through an outflow boundary.
    double density(double r, double t) const;

    /// One-mode large-time limit of q (lowest eigenvalue of the full spectrum).
    double large_time_velocity(double r) const;

    /// m(t) = omega int p dr over the domain, with an error estimate from halving the panel count.
    struct Mass {
        double mass = 0.0, error = 0.0;
    };
    Mass mass(double t, int panels = 24) const;
    /// Right-hand side of the flux identity: -omega (q p |_{outer} - q p |_{inner}).
    double mass_flux(double t) const;

    /// max over boundaries of |eps a_r + q a| / |a| at time t.
    double robin_residual(double t) const;

    /// Samples q and p = r^(n-1) rho on a tensor grid (time-major).
    RadialField sample(const std::vector<double>& r, const std::vector<double>& t, bool with_density = true,
                       int threads = 1) const;

private:
    struct Sums {
        double a, a_r, a_rr;
    };
    // Sums with the lowest mode's exponential factored out.
    Sums scaled_sums(double r, double t) const;

    BoundedProblem problem_;
    std::unique_ptr<GreenEvaluator> green_;
    std::vector<double> W_;
    std::vector<double> bound_suffix_;  // suffix max of |c W| sup|phi|
    double log_shift_ = 0.0;            // a0 was multiplied by exp(log_shift_)
};

/// Hopf-Cole variable a on a tensor grid (same constant factor as BoundedSolution::heat).
HopfColeState hopf_cole_boundary_state(const BoundedSolution& sol, const std::vector<double>& r,
                                       const std::vector<double>& t);

/// Eigenvalue dump: "index,value,residual".
void write_eigen_csv(std::ostream& os, const EigenvalueList& list);

}  // namespace zpgd
