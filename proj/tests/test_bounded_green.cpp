#include "zpgd/bounded_green.hpp"
#include "zpgd/errors.hpp"
#include "zpgd/numerics.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace zpgd;

namespace {

ScalarProfile linear(double b, double c0, double c1) { return ScalarProfile({b}, {{c0, c1}}); }

BoundedProblem outflow_ball3d()
{
    return BoundedProblem::ball(GreenCase::Ball3D, 1.0, 0.1, linear(0.0, 0.0, 0.3),
                                ScalarProfile::linear_table(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 2.0}),
                                0.3);
}

BoundedProblem through_annulus2d()
{
    return BoundedProblem::annulus(GreenCase::Annulus2D, 0.5, 1.0, 0.1, linear(0.5, 0.1, 0.2),
                                   ScalarProfile::constant(1.0), 0.1, 0.2, ScalarProfile::constant(1.0));
}

double interior_max(const std::vector<double>& v, const HopfColeState& s, int margin)
{
    double m = 0.0;
    const std::size_t nr = s.r.size();
    for (std::size_t it = margin; it + margin < s.t.size(); ++it)
        for (std::size_t ir = margin; ir + margin < nr; ++ir) m = std::max(m, std::abs(v[it * nr + ir]));
    return m;
}

std::vector<double> grid(double a, double b, int n)
{
    std::vector<double> g(n + 1);
    for (int i = 0; i <= n; ++i) g[i] = a + (b - a) * i / n;
    return g;
}

}  // namespace

TEST_SUITE("bounded_green")
{
    TEST_CASE("closed ball at rest")
    {
        const BoundedSolution sol(BoundedProblem::ball(GreenCase::Ball2D, 1.0, 0.1, ScalarProfile::constant(0.0),
                                                       ScalarProfile::constant(1.0), 0.0));
        for (double t : {0.05, 0.5, 3.0}) {
            CHECK(std::abs(sol.velocity(0.4, t).q) <= 1e-12);
            CHECK(sol.robin_residual(t) <= 1e-12);
            CHECK(sol.density(0.4, t) == doctest::Approx(1.0).epsilon(1e-10));
        }
        CHECK(sol.mass(1.0).mass == doctest::Approx(num::pi).epsilon(1e-10));
    }

    TEST_CASE("series meets the Robin condition and the flux identity")
    {
        for (const auto& P : {outflow_ball3d(), through_annulus2d()}) {
            const BoundedSolution sol(P);
            const double T = 2.0 * P.length() * P.length() / P.epsilon;
            CHECK(sol.robin_residual(0.05 * T) <= 1e-6);
            CHECK(sol.robin_residual(0.5) <= 1e-6);
            const double t = 0.5, h = 0.01 * t;
            const double dm = (sol.mass(t + h).mass - sol.mass(t - h).mass) / (2.0 * h);
            CHECK(std::abs(dm - sol.mass_flux(t)) <= 1e-4);
        }
    }

    TEST_CASE("velocity starts from q0 and matches the wall velocity")
    {
        const BoundedSolution sol(outflow_ball3d());
        CHECK(sol.velocity(0.6, 1e-9).q == doctest::Approx(0.18).epsilon(1e-6));
        for (double t : {0.2, 1.0})
            CHECK(sol.velocity(1.0, t).q == doctest::Approx(0.3).epsilon(1e-6));
    }

    TEST_CASE("heat residual converges under grid refinement")
    {
        const BoundedSolution sol(outflow_ball3d());
        double prev = 0.0;
        for (int level = 0; level < 2; ++level) {
            const int m = 20 << level;
            const auto s = hopf_cole_boundary_state(sol, grid(0.2, 0.8, m), grid(0.4, 0.6, m));
            const double res = interior_max(heat_residual(s, 0.1, 3), s, 3);
            if (level > 0) CHECK(std::log2(prev / res) >= 1.8);
            prev = res;
        }
    }

    TEST_CASE("Green's function is symmetric up to the radial weight")
    {
        for (const auto& P : {outflow_ball3d(), through_annulus2d(),
                              BoundedProblem::ball(GreenCase::Ball2D, 1.0, 0.1, ScalarProfile::constant(0.0),
                                                   ScalarProfile::constant(1.0), 0.0)}) {
            const GreenEvaluator G(P.eigen_problem(), P.epsilon);
            const int w = P.dimension() - 1;
            const double a = P.r_inner() + 0.3 * P.length(), b = P.r_inner() + 0.8 * P.length();
            CHECK(G.green(a, b, 0.2) / std::pow(b, w) ==
                  doctest::Approx(G.green(b, a, 0.2) / std::pow(a, w)).epsilon(1e-12));
        }
    }

    TEST_CASE("large-time limit is the lowest mode")
    {
        const BoundedSolution sol(through_annulus2d());
        CHECK(sol.velocity(0.75, 400.0).q == doctest::Approx(sol.large_time_velocity(0.75)).epsilon(1e-8));
    }

    TEST_CASE("inconsistent data")
    {
        // corner: q0(R) != q_B
        CHECK_THROWS_AS(BoundedProblem::ball(GreenCase::Ball3D, 1.0, 0.1, linear(0.0, 0.0, 0.5),
                                             ScalarProfile::constant(1.0), 0.1)
                            .validate(),
                        DataError);
        // inflow without boundary density
        CHECK_THROWS_AS(BoundedProblem::ball(GreenCase::Ball2D, 1.0, 0.1, ScalarProfile::constant(-0.2),
                                             ScalarProfile::constant(1.0), -0.2)
                            .validate(),
                        DataError);
        // outflow with a boundary density
        CHECK_THROWS_AS(BoundedProblem::ball(GreenCase::Ball3D, 1.0, 0.1, linear(0.0, 0.0, 0.3),
                                             ScalarProfile::constant(1.0), 0.3, ScalarProfile::constant(1.0))
                            .validate(),
                        DataError);
    }

    TEST_CASE("non-positive times")
    {
        const BoundedSolution sol(outflow_ball3d());
        CHECK_THROWS_AS(sol.velocity(0.5, -1e-3), DomainError);
        CHECK_THROWS_AS(sol.evaluator().green(0.5, 0.5, -1.0), DomainError);
        CHECK_THROWS_AS(sol.heat(0.5, 0.5 * sol.t_floor()), DomainError);
    }

    TEST_CASE("eigen CSV")
    {
        std::ostringstream os;
        write_eigen_csv(os, find_eigenvalues(EigenProblem::ball(GreenCase::Ball2D, 1.0, 0.0, 0.1), 2));
        CHECK(os.str().rfind("index,value,residual\n1,3.8317059702075", 0) == 0);
    }
}
