#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace zpgd {

/**
 * Radial velocity q and p = r^(n-1) rho sampled on a tensor (r, t) grid.
 * Samples are stored time-major: index = it * r.size() + ir.
 */
struct RadialField {
    int n = 3;
    double epsilon = 0.0;
    std::vector<double> r;
    std::vector<double> t;
    std::vector<double> q;
    std::vector<double> p;
    /// Optional per-sample flags: nonzero marks a discontinuity sample.
    std::vector<char> flags;
    /// Optional per-sample branch tag ('I' or 'B') from the inviscid solver.
    std::vector<char> branch;

    std::size_t index(std::size_t it, std::size_t ir) const { return it * r.size() + ir; }
    double rho(std::size_t it, std::size_t ir) const;

    /// Throws DataError when the grid or the samples violate the field invariants.
    void validate() const;
};

/// Positive samples a(r, t) of the linearised (heat) variable, same layout as RadialField.
struct HopfColeState {
    std::vector<double> r;
    std::vector<double> t;
    std::vector<double> a;
};

struct RadialVelocity {
    double q = 0.0;    // radial velocity
    double q_r = 0.0;  // its radial derivative
};

struct LiftedSample {
    std::vector<double> u;
    double rho = 0.0;
};

/// u = (x/|x|) q(|x|, t), rho = |x|^(1-n) p(|x|, t) with bilinear interpolation.
LiftedSample lift_to_vector(const RadialField& field, std::span<const double> x, double t);

/// q = -eps a_r / a with 4th-order differences in r (one-sided near the ends).
std::vector<double> velocity_from_hopf_cole(const HopfColeState& state, double epsilon);

struct ViscousResidual {
    std::vector<double> res_q;
    std::vector<double> res_p;
};

/**
 * Pointwise residuals of
 *   q_t + q q_r - (eps/2) [q_rr + (n-1)/r q_r - (n-1)/r^2 q]
 *   p_t + (p q)_r
 * 4th order in r, 2nd order in t. Needs at least 5 points in each direction.
 */
ViscousResidual viscous_residual(const RadialField& field);

/// Residual of a_t - (eps/2) [a_rr + (n-1)/r a_r] with the same stencils.
std::vector<double> heat_residual(const HopfColeState& state, double epsilon, int n);

/// Radial solution given in closed form: returns (q, p) at (r, t).
using RadialFunction = std::function<std::pair<double, double>(double r, double t)>;

struct CartesianResidual {
    std::vector<double> momentum;  // u_t + (u.grad)u - (eps/2) Lap u
    double continuity = 0.0;       // rho_t + div(rho u)
};

/// Cartesian residual of the n-D adhesion system for the lifted field at x, by centred differences of step h.
CartesianResidual cartesian_residual(const RadialFunction& f, int n, double epsilon, std::span<const double> x,
                                     double t, double h);

/// CSV: header "# n=<n> epsilon=<eps>", then "r,t,q,p,rho" (+ ",branch,flag" when present).
void write_csv(std::ostream& os, const RadialField& field);
void write_csv(const std::string& path, const RadialField& field);
RadialField read_csv(std::istream& is);

}  // namespace zpgd
