#include "zpgd/inviscid.hpp"
#include "zpgd/shockfront.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace zpgd;

namespace {

InviscidProblem riemann(int n)
{
    const std::vector<double> b{0.0, 1.0}, v{1.0, -0.5}, pb{0.0, 3.0}, pv{1.0, 0.0};
    return InviscidProblem::make(n, ScalarProfile::step(b, v), ScalarProfile::step(pb, pv), ScalarProfile::constant(0.0),
                                 ScalarProfile::constant(0.0));
}

std::vector<double> times(double a, double b, int count)
{
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i) t[i] = a + (b - a) * i / (count - 1);
    return t;
}

}  // namespace

TEST_SUITE("shockfront")
{
    TEST_CASE("mean curvature of spheres")
    {
        CHECK(mean_curvature(3, 2.0) == -0.5);
        CHECK(mean_curvature(2, 1.0) == -0.5);
        CHECK(mean_curvature(1, 4.0) == 0.0);
        CHECK(mean_curvature_fd(3, 2.0) == doctest::Approx(-0.5).epsilon(1e-7));
        CHECK(mean_curvature_fd(2, 0.5) == doctest::Approx(-1.0).epsilon(1e-7));
    }

    TEST_CASE("jump is inner minus outer")
    {
        CHECK(jump(1.0, -0.5) == 1.5);
    }

    TEST_CASE("tracked Riemann front in one dimension")
    {
        const auto f = track_front(riemann(1), times(0.1, 1.2, 23), 0.9, 1.1);
        REQUIRE(f.times.size() == 23);
        for (std::size_t i = 0; i < f.times.size(); ++i) {
            const double t = f.times[i];
            CHECK(f.s[i] == doctest::Approx(1.0 + 0.25 * t).epsilon(1e-9));
            CHECK(f.e[i] == doctest::Approx(1.5 * t).epsilon(1e-7));
            CHECK(f.q_minus[i] == doctest::Approx(1.0));
            CHECK(f.q_plus[i] == doctest::Approx(-0.5));
        }
        const auto res = rh_residual_1d(f);
        for (std::size_t i = 0; i < f.times.size(); ++i) {
            CHECK(std::abs(res.res_speed[i]) <= 1e-6);
            CHECK(std::abs(res.res_mass[i]) <= 1e-6);
        }
        const auto md = rh_residual_multid(f);
        for (std::size_t i = 0; i < f.times.size(); ++i)
            CHECK(std::abs(md.mass_scaled[i]) <= std::abs(res.res_mass[i]) + 1e-10);
    }

    TEST_CASE("multi-d residual equals the radial one after scaling")
    {
        for (int n : {2, 3}) {
            const auto f = track_front(riemann(n), times(0.05, 0.65, 61), 0.9, 1.1);
            const auto r1 = rh_residual_1d(f);
            const auto md = rh_residual_multid(f);
            for (std::size_t i = 1; i + 1 < f.times.size(); ++i) {
                CHECK(std::abs(md.mass_scaled[i]) <= std::abs(r1.res_mass[i]) + 1e-10);
                CHECK(std::abs(md.speed[i]) <= std::abs(r1.res_speed[i]) + 1e-10);
            }
        }
    }

    TEST_CASE("detection and linking on a panel")
    {
        const auto P = riemann(1);
        std::vector<double> r = times(0.05, 2.5, 50);
        const auto d = detect_fronts(P, solve_panel(P, r, times(0.25, 1.0, 4)));
        REQUIRE(d.fronts.size() == 1);
        const auto& f = d.fronts.front();
        REQUIRE(f.times.size() == 4);
        CHECK(f.s.back() == doctest::Approx(1.25).epsilon(1e-9));
        CHECK(f.e.back() == doctest::Approx(1.5).epsilon(1e-7));
    }

    TEST_CASE("front CSV")
    {
        const auto f = track_front(riemann(1), times(0.2, 0.6, 3), 0.9, 1.1);
        std::ostringstream os;
        write_front_csv(os, f);
        const auto text = os.str();
        CHECK(text.find("t,s,e,q_plus,q_minus,p_plus,p_minus,res_speed,res_mass,res_multid\n") != std::string::npos);
        CHECK(std::count(text.begin(), text.end(), '\n') == 5);
    }
}
