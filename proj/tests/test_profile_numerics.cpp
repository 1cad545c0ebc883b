#include "zpgd/errors.hpp"
#include "zpgd/numerics.hpp"
#include "zpgd/profile.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <limits>

using namespace zpgd;

TEST_SUITE("profile")
{
    TEST_CASE("piecewise polynomial evaluation and exact integrals")
    {
        // 1 + 2x on [0, 1), then 3 - (x - 1)^2
        const ScalarProfile f({0.0, 1.0}, {{1.0, 2.0}, {3.0, 0.0, -1.0}});
        CHECK(f(0.5) == doctest::Approx(2.0));
        CHECK(f(2.0) == doctest::Approx(2.0));
        CHECK(f.derivative(0.25) == doctest::Approx(2.0));
        CHECK(f.derivative(3.0) == doctest::Approx(-4.0));
        CHECK(f.integral(0.0, 2.0) == doctest::Approx(2.0 + 3.0 - 1.0 / 3.0));
        CHECK(f.integral(2.0, 0.0) == doctest::Approx(-(2.0 + 3.0 - 1.0 / 3.0)));
        CHECK(f.antiderivative(1.0) == doctest::Approx(2.0));
        CHECK(f.sup_abs() == std::numeric_limits<double>::infinity());
        CHECK(f.sup_abs(0.0, 2.0) == doctest::Approx(3.0));
    }

    TEST_CASE("tables and steps")
    {
        const std::vector<double> x{0.0, 1.0, 2.0}, y{0.0, 1.0, -1.0};
        const auto t = ScalarProfile::linear_table(x, y);
        CHECK(t(0.5) == doctest::Approx(0.5));
        CHECK(t(1.5) == doctest::Approx(0.0));
        CHECK(t(10.0) == doctest::Approx(-1.0));
        CHECK(t.sup_abs() == doctest::Approx(1.0));

        const std::vector<double> b{0.0, 1.0, 2.0}, v{1.0, -0.5, 0.0};
        const auto s = ScalarProfile::step(b, v);
        CHECK(s(0.999) == 1.0);
        CHECK(s(1.0) == -0.5);
        CHECK(s.support_end() == doctest::Approx(2.0));
        CHECK(s.integral(0.0, 5.0) == doctest::Approx(0.5));
        CHECK_FALSE(s.identically_zero());
        CHECK(ScalarProfile::constant(0.0).identically_zero());
    }

    TEST_CASE("positive part squared")
    {
        // f = x - 1 on [0, 3]: int_1^3 (x - 1)^2 = 8 / 3
        const ScalarProfile f({0.0}, {{-1.0, 1.0}});
        CHECK(f.positive_part_square_integral(0.0, 3.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
        const std::vector<double> b{0.0, 1.0}, v{-2.0, 0.5};
        CHECK(ScalarProfile::step(b, v).positive_part_square_integral(0.0, 3.0) == doctest::Approx(0.5));
    }

    TEST_CASE("malformed profiles")
    {
        CHECK_THROWS(ScalarProfile({1.0, 0.0}, {{1.0}, {2.0}}));
        CHECK_THROWS(ScalarProfile({0.0, 1.0}, {{1.0}}));
        const std::vector<double> x{0.0, 1.0}, y{1.0};
        CHECK_THROWS(ScalarProfile::linear_table(x, y));
    }
}

TEST_SUITE("numerics")
{
    TEST_CASE("sphere measure")
    {
        CHECK(num::sphere_measure(1) == 2.0);
        CHECK(num::sphere_measure(2) == doctest::Approx(2.0 * num::pi));
        CHECK(num::sphere_measure(3) == doctest::Approx(4.0 * num::pi));
    }

    TEST_CASE("Gauss panels integrate smooth functions")
    {
        CHECK(num::integrate_panels([](double x) { return std::exp(x); }, 0.0, 1.0, 4) ==
              doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
        const auto q = num::panel_nodes(0.0, num::pi, 6);
        double s = 0.0;
        for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * std::sin(q.x[i]);
        CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
    }

    TEST_CASE("panels split at breaks integrate kinks exactly")
    {
        const std::vector<double> br{0.3};
        const auto q = num::panel_nodes(0.0, 1.0, 3, br);
        double s = 0.0;
        for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * std::abs(q.x[i] - 0.3);
        CHECK(s == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-15));
    }

    TEST_CASE("Fornberg weights and stencil derivatives")
    {
        const std::vector<double> xs{-1.0, 0.0, 1.0};
        const auto w = num::fornberg_weights(0.0, xs, 2);
        CHECK(w[1][0] == doctest::Approx(-0.5));
        CHECK(w[1][2] == doctest::Approx(0.5));
        CHECK(w[2][1] == doctest::Approx(-2.0));

        std::vector<double> x(11), f(11);
        for (int i = 0; i < 11; ++i) {
            x[i] = 0.1 * i;
            f[i] = x[i] * x[i] * x[i];
        }
        CHECK(num::stencil_derivative(x, f, 5, 1, 5) == doctest::Approx(3.0 * 0.25).epsilon(1e-12));
        CHECK(num::stencil_derivative(x, f, 0, 1, 5) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(num::stencil_derivative(x, f, 10, 2, 5) == doctest::Approx(6.0).epsilon(1e-10));
    }

    TEST_CASE("bisection")
    {
        CHECK(num::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK_THROWS_AS(num::bisect([](double x) { return x * x + 1.0; }, 0.0, 2.0), NumericalError);
    }

    TEST_CASE("Dormand-Prince integration with an event")
    {
        const auto rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = -y[0]; };
        const auto r = num::integrate_ode(rhs, 0.0, 2.0, {1.0});
        CHECK(r.y[0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
        const auto back = num::integrate_ode(rhs, 2.0, 0.0, {std::exp(-2.0)});
        CHECK(back.y[0] == doctest::Approx(1.0).epsilon(1e-9));
        const auto ev = num::integrate_ode(rhs, 0.0, 5.0, {1.0}, {},
                                           [](double, std::span<const double> y) { return y[0] - 0.5; });
        CHECK(ev.event);
        CHECK(ev.s == doctest::Approx(std::log(2.0)).epsilon(1e-8));
    }

    TEST_CASE("parallel_for visits every index once")
    {
        std::vector<std::atomic<int>> hits(257);
        num::parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
        for (const auto& h : hits) CHECK(h.load() == 1);
    }
}
