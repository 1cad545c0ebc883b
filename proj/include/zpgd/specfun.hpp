#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace zpgd {

enum class BesselKind { J, Y };

/// Bessel functions of the first (J) and second (Y) kind, orders 0 and 1.
/// Throws DomainError for Y at x <= 0, J at x < 0, or other orders.
double bessel(BesselKind kind, int order, double x);

/// Modified Bessel functions I_k, K_k (k = 0, 1); used for growing modes under inflow.
double bessel_i(int order, double x);
double bessel_k(int order, double x);

enum class GreenCase { Ball2D, Ball3D, Annulus2D, Annulus3D };

std::string_view to_string(GreenCase c);
GreenCase green_case_from_string(std::string_view s);
int dimension_of(GreenCase c);
bool is_ball(GreenCase c);

/**
 * Radial Sturm-Liouville problem a'' + (n-1)/r a' = -sigma a with Robin
 * conditions a' + k a = 0 at the boundary (k = q/eps). For the ball only the
 * outer condition applies; for the annulus k1 acts at R1 and k2 at R2.
 *
 * Eigenvalues of the ball cases are dimensionless (sigma = mu^2 / R^2); annulus
 * eigenvalues carry units of 1/length (sigma = lambda^2).
 */
struct EigenProblem {
    GreenCase kind = GreenCase::Ball2D;
    double R = 1.0;
    double R1 = 0.5, R2 = 1.0;
    double k = 0.0;
    double k1 = 0.0, k2 = 0.0;

    static EigenProblem ball(GreenCase kind, double R, double q_B, double epsilon);
    static EigenProblem annulus(GreenCase kind, double R1, double R2, double q1, double q2, double epsilon);

    /// Annulus-3D boundary constants: b1 = 1 - k1 R1, b2 = k2 R2 - 1.
    double b1() const { return 1.0 - k1 * R1; }
    double b2() const { return k2 * R2 - 1.0; }

    void validate() const;
    /// Natural spacing of consecutive roots (pi in mu units, pi / (R2 - R1) in lambda units).
    double root_spacing() const;
    /// Whether sigma = 0 is an eigenvalue (pure Neumann data).
    bool has_zero_mode() const;
};

/**
 * Left-hand side of the characteristic equation at mu > 0:
 *   Ball2D     mu J1(mu) - k R J0(mu)
 *   Ball3D     mu cot(mu) + k R - 1           (nullopt at a pole of cot)
 *   Annulus2D  Bessel cross-product determinant, both inner-boundary factors at lambda R1
 *   Annulus3D  (b1 b2 - R1 R2 l^2) sin(l L) + l (R1 b2 + R2 b1) cos(l L)
 */
std::optional<double> characteristic_value(const EigenProblem& p, double mu);

/// Pole-free form with the same positive roots (Ball3D: mu cos mu + (kR - 1) sin mu).
double scan_value(const EigenProblem& p, double mu);

/// Characteristic function of negative eigenvalues sigma = -kappa^2 (scaled to avoid overflow).
double hyperbolic_value(const EigenProblem& p, double kappa);

struct EigenvalueList {
    std::vector<double> values;
    std::vector<double> residuals;
};

struct ScanOptions {
    double step = 0.0;        // 0: root_spacing() / 40
    double max_value = 0.0;   // 0: (count + 20) * root_spacing() * 4
};

/// First `count` positive roots; throws NumericalError("insufficient scan range") when the scan runs out.
EigenvalueList find_eigenvalues(const EigenProblem& p, int count, const ScanOptions& opts = {});

/// All kappa > 0 with hyperbolic_value = 0 (growing modes, present only under inflow).
std::vector<double> find_growing_modes(const EigenProblem& p);

}  // namespace zpgd
