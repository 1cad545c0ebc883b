#include "zpgd/errors.hpp"
#include "zpgd/freespace.hpp"
#include "zpgd/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace zpgd;

namespace {

ScalarProfile step(std::vector<double> b, std::vector<double> v) { return ScalarProfile::step(b, v); }

// Even extension of q0 = 1 on [0, 1), -0.5 beyond.
FreespaceProblem riemann_1d(double eps)
{
    return FreespaceProblem::radial(1, eps, step({0.0, 1.0}, {1.0, -0.5}), step({0.0, 3.0}, {1.0, 0.0}));
}

}  // namespace

TEST_SUITE("freespace")
{
    TEST_CASE("Hopf-Cole quadrature against a direct line integral")
    {
        // Frozen: mpmath quadrature of the Gaussian-weighted ratio on the whole line.
        CHECK(radial_velocity(riemann_1d(0.1), 0.5, 1.0).q == doctest::Approx(0.421809823759524499).epsilon(1e-9));
        CHECK(radial_velocity(riemann_1d(0.1), 1.2, 1.0).q == doctest::Approx(0.363454551413289502).epsilon(1e-9));
        CHECK(radial_velocity(riemann_1d(0.2), 2.0, 0.5).q == doctest::Approx(-0.499879414570793766).epsilon(1e-9));
    }

    TEST_CASE("separable potential reduces to the line problem")
    {
        const auto Phi = [](double y) {
            y = std::abs(y);
            return y < 1.0 ? y : 1.0 - 0.5 * (y - 1.0);
        };
        const auto P = FreespaceProblem::general(
            2, 0.1, [&](std::span<const double> x) { return Phi(x[0]); },
            [](std::span<const double> x, std::span<double> g) {
                const double s = x[0] < 0.0 ? -1.0 : 1.0;
                g[0] = std::abs(x[0]) < 1.0 ? s : -0.5 * s;
                g[1] = 0.0;
            },
            1.0, step({0.0, 3.0}, {1.0, 0.0}));
        const std::vector<double> x{0.5, 0.7};
        const auto u = velocity(P, x, 1.0);
        // the tensor rule converges at second order across the kinks of phi0
        CHECK(u[0] == doctest::Approx(0.421809823759524499).epsilon(3e-5));
        CHECK(std::abs(u[1]) <= 1e-9);
    }

    TEST_CASE("linear data: closed form velocity and density")
    {
        // q0 = r is the gradient of |x|^2 / 2; u = x / (1 + t), X0 = x / (1 + t).
        const ScalarProfile q0({0.0}, {{0.0, 1.0}});
        for (int n : {1, 2, 3}) {
            const auto P = FreespaceProblem::radial(n, 0.1, q0, step({0.0, 2.0}, {1.0, 0.0}));
            const auto v = radial_velocity(P, 1.3, 0.7);
            CHECK(v.q == doctest::Approx(1.3 / 1.7).epsilon(1e-10));
            CHECK(v.q_r == doctest::Approx(1.0 / 1.7).epsilon(1e-8));
            const std::vector<double> x(n, 1.0 / std::sqrt(double(n)));
            CHECK(density(P, x, 0.5) == doctest::Approx(std::pow(1.5, -n)).epsilon(1e-7));
            const auto y = forward_trace(P, x, 0.5);
            CHECK(y[0] == doctest::Approx(1.5 * x[0]).epsilon(1e-8));
        }
    }

    TEST_CASE("velocity on the negative half-line is odd")
    {
        const ScalarProfile q0({0.0}, {{0.0, 1.0}});
        const auto P = FreespaceProblem::radial(1, 0.1, q0, step({0.0, 2.0}, {1.0, 0.0}));
        const std::vector<double> x{-3.0};
        CHECK(velocity(P, x, 2.0)[0] == doctest::Approx(-1.0).epsilon(1e-10));
    }

    TEST_CASE("gas at rest stays at rest")
    {
        const auto P = FreespaceProblem::radial(3, 0.1, ScalarProfile::constant(0.0), step({0.0, 1.0}, {2.0, 0.0}));
        const std::vector<double> x{0.3, 0.2, 0.1};
        for (double u : velocity(P, x, 1.0)) CHECK(std::abs(u) <= 1e-14);
        CHECK(density(P, x, 1.0) == doctest::Approx(2.0).epsilon(1e-8));
        CHECK(total_mass(P, 1.0).mass == doctest::Approx(8.0 * num::pi / 3.0).epsilon(1e-8));
    }

    TEST_CASE("velocity never exceeds sup |q0|")
    {
        const auto q0 = ScalarProfile::linear_table(std::vector<double>{0.0, 0.5, 1.5, 3.0},
                                                    std::vector<double>{0.0, 0.8, -0.3, 0.0});
        std::mt19937_64 gen(7);
        std::uniform_real_distribution<double> ur(0.01, 4.0), ut(0.05, 5.0);
        for (int n : {1, 2, 3}) {
            const auto P = FreespaceProblem::radial(n, 0.1, q0, step({0.0, 2.0}, {1.0, 0.0}));
            const double bound = gradient_sup(P);
            CHECK(bound == doctest::Approx(0.8));
            for (int i = 0; i < 50; ++i) CHECK(std::abs(radial_velocity(P, ur(gen), ut(gen)).q) <= bound + 1e-8);
        }
    }

    TEST_CASE("mass is conserved for an expanding flow")
    {
        const auto q0 = ScalarProfile::linear_table(std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>{0.0, 0.5, 0.5});
        const auto P = FreespaceProblem::radial(1, 0.1, q0, step({0.0, 2.0}, {1.0, 0.0}));
        const double m0 = total_mass(P, 0.0, {8}).mass;
        CHECK(m0 == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(std::abs(total_mass(P, 1.0, {8}).mass - m0) <= 1e-5 * m0);
    }

    TEST_CASE("errors")
    {
        const auto P = riemann_1d(0.1);
        CHECK_THROWS_AS(radial_velocity(P, 0.5, 0.0), DomainError);
        CHECK_THROWS_AS(radial_velocity(P, 0.5, -1.0), DomainError);
        const auto unbounded = FreespaceProblem::radial(2, 0.1, ScalarProfile({0.0}, {{0.0, 1.0}}), step({0.0, 1.0}, {1.0, 0.0}));
        CHECK_THROWS_AS(gradient_sup(unbounded), DataError);
        const auto general = FreespaceProblem::general(
            2, 0.1, [](std::span<const double> x) { return x[0] * x[0] * x[0]; },
            [](std::span<const double> x, std::span<double> g) {
                g[0] = 3.0 * x[0] * x[0];
                g[1] = 0.0;
            },
            std::nullopt, step({0.0, 1.0}, {1.0, 0.0}));
        CHECK_THROWS_AS(gradient_sup(general), DataError);
        CHECK_THROWS(FreespaceProblem::radial(1, -0.1, ScalarProfile::constant(0.0), step({0.0, 1.0}, {1.0, 0.0})).validate());
    }
}
