#pragma once

#include "zpgd/profile.hpp"
#include "zpgd/radial_core.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace zpgd {

/**
 * Viscous (adhesion) problem in R^n with potential initial velocity u0 = grad phi0.
 *
 * Either radial (phi0(x) = int_0^|x| q0) or general (phi0 and its gradient as
 * callables). The initial density is always a radial profile rho0(|x|).
 * Inputs are taken to be smooth already; no mollification is applied.
 */
struct FreespaceProblem {
    using Potential = std::function<double(std::span<const double>)>;
    using Gradient = std::function<void(std::span<const double>, std::span<double>)>;

    int n = 1;
    double epsilon = 1.0;
    std::optional<ScalarProfile> q0;       // radial form
    Potential phi0;                         // general form
    Gradient grad_phi0;
    std::optional<double> gradient_bound;  // Lipschitz constant of phi0 when known
    ScalarProfile rho0;

    static FreespaceProblem radial(int n, double epsilon, ScalarProfile q0, ScalarProfile rho0);
    static FreespaceProblem general(int n, double epsilon, Potential phi0, Gradient grad,
                                    std::optional<double> gradient_bound, ScalarProfile rho0);

    bool is_radial() const { return q0.has_value(); }
    double potential(std::span<const double> x) const;
    void gradient(std::span<const double> x, std::span<double> g) const;
    void validate() const;
};

/// sup |grad phi0|. Throws DataError when the gradient is numerically unbounded (phi0 not Lipschitz).
double gradient_sup(const FreespaceProblem& p);

/// Radial problems only: q and q_r from the angle-averaged heat-kernel integral (1-D quadrature).
RadialVelocity radial_velocity(const FreespaceProblem& p, double r, double t);

/// Velocity from the scaled Gaussian-weighted ratio of n-D integrals (tensor quadrature).
std::vector<double> velocity_direct(const FreespaceProblem& p, std::span<const double> x, double t);

/// Velocity and its Jacobian du_j/dx_k (row-major n x n) from the tensor quadrature.
std::pair<std::vector<double>, std::vector<double>> velocity_direct_with_gradient(const FreespaceProblem& p,
                                                                                 std::span<const double> x,
                                                                                 double t);

/// Velocity at (x, t): radial route for radial problems, tensor route otherwise. Throws DomainError for t <= 0.
std::vector<double> velocity(const FreespaceProblem& p, std::span<const double> x, double t);

/// Jacobian du_j/dx_k (row-major).
std::vector<double> velocity_gradient(const FreespaceProblem& p, std::span<const double> x, double t);

struct CharacteristicFoot {
    std::vector<double> X0;
    double jac = 1.0;  // determinant of dX0/dx
};

/**
 * Backward characteristic dX/ds = u(X, s) from s = t to 0, with the
 * variational equation dM/ds = grad u M integrated alongside (M(t) = I).
 */
CharacteristicFoot trace_characteristic(const FreespaceProblem& p, std::span<const double> x, double t);

/// Forward image X(t) of an initial point x0.
std::vector<double> forward_trace(const FreespaceProblem& p, std::span<const double> x0, double t);

/// rho(x, t) = rho0(|X0|) * jac.
double density(const FreespaceProblem& p, std::span<const double> x, double t);

struct QuadratureSpec {
    int panels = 24;
};

struct MassEstimate {
    double mass = 0.0;
    double error = 0.0;  // |mass(panels) - mass(panels / 2)|
};

/// Total mass at time t over a ball containing the image of supp rho0.
MassEstimate total_mass(const FreespaceProblem& p, double t, const QuadratureSpec& spec = {});

}  // namespace zpgd
