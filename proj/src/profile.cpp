#include "zpgd/profile.hpp"

#include "zpgd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zpgd {

namespace {

double horner(const std::vector<double>& c, double u)
{
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * u + *it;
    return v;
}

double horner_derivative(const std::vector<double>& c, double u)
{
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) v = v * u + static_cast<double>(k) * c[k];
    return v;
}

double horner_primitive(const std::vector<double>& c, double u)
{
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * u + c[k] / static_cast<double>(k + 1);
    return v * u;
}

// Sign changes of g on [lo, hi], located by sampling and bisection.
template <class G>
std::vector<double> sign_changes(G&& g, double lo, double hi, int samples = 64)
{
    std::vector<double> roots;
    double x0 = lo, g0 = g(lo);
    for (int k = 1; k <= samples; ++k) {
        const double x1 = lo + (hi - lo) * k / samples;
        const double g1 = g(x1);
        if (g0 == 0.0) {
            roots.push_back(x0);
        } else if (g0 * g1 < 0.0) {
            double a = x0, b = x1, ga = g0;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                const double gm = g(m);
                if ((gm < 0.0) == (ga < 0.0)) {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        x0 = x1;
        g0 = g1;
    }
    return roots;
}

}  // namespace

ScalarProfile::ScalarProfile() : ScalarProfile({0.0}, {{0.0}}) {}

ScalarProfile::ScalarProfile(std::vector<double> breaks, std::vector<std::vector<double>> coeffs)
    : breaks_(std::move(breaks)), coeffs_(std::move(coeffs))
{
    if (breaks_.empty() || breaks_.size() != coeffs_.size())
        throw DataError("profile: need one coefficient list per breakpoint");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (!(breaks_[i] > breaks_[i - 1])) throw DataError("profile: breakpoints must increase strictly");
    for (auto& c : coeffs_) {
        if (c.empty()) c.push_back(0.0);
        for (double v : c)
            if (!std::isfinite(v)) throw DataError("profile: coefficients must be finite");
    }
    cumulative_.assign(breaks_.size(), 0.0);
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        cumulative_[i] = cumulative_[i - 1] + piece_primitive(i - 1, breaks_[i]);
}

ScalarProfile ScalarProfile::constant(double value) { return ScalarProfile({0.0}, {{value}}); }

ScalarProfile ScalarProfile::linear_table(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.empty()) throw DataError("profile: table sizes differ");
    std::vector<double> b(x.begin(), x.end());
    std::vector<std::vector<double>> c;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        c.push_back({y[i], (y[i + 1] - y[i]) / (x[i + 1] - x[i])});
    c.push_back({y.back()});
    return ScalarProfile(std::move(b), std::move(c));
}

ScalarProfile ScalarProfile::step(std::span<const double> breaks, std::span<const double> values)
{
    if (breaks.size() != values.size()) throw DataError("profile: step sizes differ");
    std::vector<std::vector<double>> c;
    for (double v : values) c.push_back({v});
    return ScalarProfile(std::vector<double>(breaks.begin(), breaks.end()), std::move(c));
}

std::size_t ScalarProfile::piece_of(double x) const
{
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    if (it == breaks_.begin()) return 0;
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

double ScalarProfile::piece_value(std::size_t i, double x) const { return horner(coeffs_[i], x - breaks_[i]); }

double ScalarProfile::piece_primitive(std::size_t i, double x) const
{
    return horner_primitive(coeffs_[i], x - breaks_[i]);
}

double ScalarProfile::operator()(double x) const { return piece_value(piece_of(x), x); }

double ScalarProfile::derivative(double x) const
{
    const auto i = piece_of(x);
    return horner_derivative(coeffs_[i], x - breaks_[i]);
}

double ScalarProfile::antiderivative(double x) const
{
    const auto i = piece_of(x);
    return cumulative_[i] + piece_primitive(i, x);
}

double ScalarProfile::integral(double a, double b) const { return antiderivative(b) - antiderivative(a); }

double ScalarProfile::positive_part_square_integral(double a, double b) const
{
    if (a == b) return 0.0;
    if (a > b) return -positive_part_square_integral(b, a);

    double total = 0.0;
    std::vector<double> cuts{a};
    for (double br : breaks_)
        if (br > a && br < b) cuts.push_back(br);
    cuts.push_back(b);

    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        const auto i = piece_of(0.5 * (lo + hi));
        const auto& c = coeffs_[i];
        std::vector<double> sq(2 * c.size() - 1, 0.0);
        for (std::size_t p = 0; p < c.size(); ++p)
            for (std::size_t q = 0; q < c.size(); ++q) sq[p + q] += c[p] * c[q];

        std::vector<double> sub{lo};
        if (c.size() > 1)
            for (double r : sign_changes([&](double x) { return piece_value(i, x); }, lo, hi)) sub.push_back(r);
        sub.push_back(hi);
        for (std::size_t m = 0; m + 1 < sub.size(); ++m) {
            const double s0 = sub[m], s1 = sub[m + 1];
            if (s1 <= s0) continue;
            if (piece_value(i, 0.5 * (s0 + s1)) <= 0.0) continue;
            total += horner_primitive(sq, s1 - breaks_[i]) - horner_primitive(sq, s0 - breaks_[i]);
        }
    }
    return total;
}

double ScalarProfile::sup_abs(double a, double b) const
{
    if (a > b) std::swap(a, b);
    double s = std::max(std::abs((*this)(a)), std::abs((*this)(b)));
    std::vector<double> cuts{a};
    for (double br : breaks_)
        if (br > a && br < b) cuts.push_back(br);
    cuts.push_back(b);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        const auto i = piece_of(0.5 * (lo + hi));
        s = std::max({s, std::abs(piece_value(i, lo)), std::abs(piece_value(i, hi))});
        if (coeffs_[i].size() > 2)
            for (double r : sign_changes([&](double x) { return horner_derivative(coeffs_[i], x - breaks_[i]); }, lo, hi))
                s = std::max(s, std::abs(piece_value(i, r)));
    }
    return s;
}

double ScalarProfile::sup_abs() const
{
    const auto& last = coeffs_.back();
    for (std::size_t k = 1; k < last.size(); ++k)
        if (last[k] != 0.0) return std::numeric_limits<double>::infinity();
    return std::max(sup_abs(breaks_.front(), breaks_.back()), std::abs(last[0]));
}

double ScalarProfile::support_end() const
{
    const auto zero = [](const std::vector<double>& c) {
        return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
    };
    if (!zero(coeffs_.back())) return std::numeric_limits<double>::infinity();
    std::size_t i = coeffs_.size() - 1;
    while (i > 0 && zero(coeffs_[i - 1])) --i;
    return breaks_[i];
}

bool ScalarProfile::identically_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& c) {
        return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
    });
}

}  // namespace zpgd
