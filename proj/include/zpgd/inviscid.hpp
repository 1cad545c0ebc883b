#pragma once

#include "zpgd/profile.hpp"
#include "zpgd/radial_core.hpp"

#include <string>
#include <vector>

namespace zpgd {

/**
 * Radial zero-pressure gas on r > 0 with data at the origin:
 * q_B(t) is the radial velocity imposed at r = 0 and p_B(t) the total mass
 * omega * int_0^inf p dr required while the origin is an inflow boundary.
 * Profiles q0, p0 are functions of r; q_B, p_B functions of t.
 */
struct InviscidProblem {
    int n = 3;
    ScalarProfile q0;
    ScalarProfile p0;  // r^(n-1) rho0
    ScalarProfile q_B;
    ScalarProfile p_B;
    double omega = 1.0;

    /// omega is the unit-sphere measure (2 pi, 4 pi); 1 for the half-line n = 1.
    static InviscidProblem make(int n, ScalarProfile q0, ScalarProfile p0, ScalarProfile q_B, ScalarProfile p_B);
    void validate() const;

    /// int_0^s (q_B^+)^2 / 2.
    double boundary_credit(double s) const;
    /// int_0^r0 q0.
    double potential(double r0) const { return q0.integral(0.0, r0); }
};

double interior_cost(double r, double r0, double t);

/// Cost of the three-segment path (r0, 0) -> (0, t1) -> (0, t2) -> (r, t); +inf outside the admissible set.
double boundary_cost(double r, double r0, double t, double t1, double t2, const ScalarProfile& q_B);

enum class Branch { Interior, Boundary };

struct PathMinimum {
    Branch branch = Branch::Interior;
    double r0 = 0.0;
    double t1 = 0.0, t2 = 0.0;
    double value = 0.0;  // Q(r, t)
    /// Another minimizer with (numerically) the same value gives a different velocity.
    bool discontinuity = false;
};

/// Q(r, t) = min over r0 of [int_0^r0 q0 + min(A, B)], with the minimizing path.
PathMinimum minimize_paths(const InviscidProblem& problem, double r, double t);

struct InviscidSample {
    double q = 0.0;
    double P = 0.0;  // -int_r^inf p
    double p = 0.0;
    double rho = 0.0;
    Branch branch = Branch::Interior;
    bool discontinuity = false;
    // One-sided limits, filled for discontinuity samples.
    double q_minus = 0.0, q_plus = 0.0;
    double P_minus = 0.0, P_plus = 0.0;
};

/// Velocity, cumulative mass P and its derivative p at (r, t).
InviscidSample solution(const InviscidProblem& problem, double r, double t);

/// P(r, t) from a path minimum.
double cumulative_mass(const InviscidProblem& problem, const PathMinimum& m);
/// Velocity from a path minimum.
double path_velocity(const PathMinimum& m, double r, double t);

/// Samples the solution on a tensor grid: q, p, branch tags ('I'/'B') and discontinuity flags.
RadialField solve_panel(const InviscidProblem& problem, const std::vector<double>& r, const std::vector<double>& t,
                        int threads = 1);

struct OriginSample {
    double t = 0.0;
    double q = 0.0;     // q(0+, t)
    double mass = 0.0;  // omega int_0^inf p dr
};

/// q(0+, t) and the total mass at each time, probing the solution at r = r_probe.
std::vector<OriginSample> sample_origin(const InviscidProblem& problem, const std::vector<double>& times,
                                        double r_probe = 1e-7);

struct WeakBoundaryReport {
    int checked = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/**
 * Boundary condition in weak form at each sample: either q(0+) = q_B, or
 * q(0+) <= 0 with q(0+)^2 >= (q_B^+)^2 (the boundary-entropy inequality for the flux q^2/2); and when q(0+) > 0 the total mass must equal p_B.
 */
WeakBoundaryReport weak_boundary_check(const InviscidProblem& problem, const std::vector<OriginSample>& samples,
                                       double q_tol = 1e-6, double mass_tol = 1e-3);

}  // namespace zpgd
