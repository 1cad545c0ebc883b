#pragma once

#include <span>
#include <utility>
#include <vector>

namespace zpgd {

/**
 * Piecewise-polynomial function of one variable.
 *
 * Piece i lives on [breaks[i], breaks[i+1]) and is written in the local
 * variable (x - breaks[i]):  sum_k coeffs[i][k] (x - breaks[i])^k.
 * The last piece extends to +infinity and the first piece is extrapolated
 * below breaks[0]. Antiderivatives are exact.
 */
class ScalarProfile {
public:
    ScalarProfile();
    ScalarProfile(std::vector<double> breaks, std::vector<std::vector<double>> coeffs);

    static ScalarProfile constant(double value);
    /// Continuous piecewise-linear interpolant through (x, y); constant beyond the last point.
    static ScalarProfile linear_table(std::span<const double> x, std::span<const double> y);
    /// Piecewise constant: value[i] on [breaks[i], breaks[i+1]).
    static ScalarProfile step(std::span<const double> breaks, std::span<const double> values);

    double operator()(double x) const;
    double derivative(double x) const;

    /// Exact integral over [a, b] (signed; a > b allowed).
    double integral(double a, double b) const;
    /// Antiderivative anchored at breaks.front() (F(breaks.front()) = 0).
    double antiderivative(double x) const;

    /// Integral over [a, b] of (max(f, 0))^2, exact up to root location.
    double positive_part_square_integral(double a, double b) const;

    /// sup |f| over [breaks.front(), inf); +inf when the last piece is not constant.
    double sup_abs() const;
    /// sup |f| over [a, b].
    double sup_abs(double a, double b) const;

    /// Smallest x beyond which f vanishes identically, or +inf.
    double support_end() const;

    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<std::vector<double>>& coeffs() const { return coeffs_; }

    bool identically_zero() const;

private:
    std::size_t piece_of(double x) const;
    double piece_value(std::size_t i, double x) const;
    double piece_primitive(std::size_t i, double x) const;  // int_{b_i}^{x} of piece i

    std::vector<double> breaks_;
    std::vector<std::vector<double>> coeffs_;
    std::vector<double> cumulative_;  // antiderivative at each break
};

}  // namespace zpgd
