#include "zpgd/bounded_green.hpp"
#include "zpgd/errors.hpp"
#include "zpgd/inviscid.hpp"
#include "zpgd/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

using namespace zpgd;
using namespace zpgd::oracle;

namespace {

ScalarProfile step(std::vector<double> b, std::vector<double> v) { return ScalarProfile::step(b, v); }

double total(const std::vector<Particle>& ps, double Particle::*f, bool weighted)
{
    double s = 0.0;
    for (const auto& p : ps) s += weighted ? p.m * (p.*f) : p.*f;
    return s;
}

}  // namespace

TEST_SUITE("oracles")
{
    TEST_CASE("fd: gas at rest in a closed ball stays at rest")
    {
        const auto b = BoundedProblem::ball(GreenCase::Ball3D, 1.0, 0.1, ScalarProfile::constant(0.0),
                                            ScalarProfile::constant(1.0), 0.0);
        FDSolverConfig cfg;
        cfg.cells = 100;
        cfg.output_times = {0.5, 1.0};
        const auto sol = fd_viscous_solve(FdProblem::from_bounded(b), cfg);
        for (double q : sol.field.q) CHECK(q == 0.0);
        CHECK(sol.mass.back() == doctest::Approx(sol.mass.front()).epsilon(1e-12));
    }

    TEST_CASE("fd: line case reduces to viscous Burgers with u = x / (1 + t)")
    {
        FdProblem p;
        p.n = 1;
        p.epsilon = 0.1;
        p.r_in = 0.0;
        p.r_out = 2.0;
        p.q0 = ScalarProfile({0.0}, {{0.0, 1.0}});
        p.rho0 = ScalarProfile::constant(1.0);
        p.q_out = [](double t) { return 2.0 / (1.0 + t); };
        FDSolverConfig cfg;
        cfg.cells = 200;
        cfg.output_times = {1.0};
        const auto sol = fd_viscous_solve(p, cfg);
        double err = 0.0;
        for (std::size_t i = 0; i < sol.field.r.size(); ++i)
            err = std::max(err, std::abs(sol.field.q[i] - sol.field.r[i] / 2.0));
        CHECK(err <= 1e-4);
    }

    TEST_CASE("fd: agrees with the series in a ball")
    {
        const auto b = BoundedProblem::ball(GreenCase::Ball3D, 1.0, 0.1, ScalarProfile({0.0}, {{0.0, 0.3}}),
                                            ScalarProfile::linear_table(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 2.0}),
                                            0.3);
        FDSolverConfig cfg;
        cfg.output_times = {0.5};
        const auto fd = fd_viscous_solve(FdProblem::from_bounded(b), cfg);
        const BoundedSolution series(b);
        double err = 0.0;
        for (std::size_t i = 0; i < fd.field.r.size(); ++i) {
            const double r = fd.field.r[i];
            if (r < 0.1 || r > 0.9) continue;
            err = std::max(err, std::abs(fd.field.q[i] - series.velocity(r, 0.5).q));
        }
        CHECK(err <= 1e-3);
        // mass flux identity on the oracle itself, dm/dt = -q p at the wall
        double prev = 0.0;
        for (int cells : {400, 800}) {
            const auto b2 = fd_viscous_solve(FdProblem::from_bounded(b),
                                             FDSolverConfig{cells, 0.0, 0.4, 2e-5, {0.4975, 0.5, 0.5025}});
            const double dm = (b2.mass[2] - b2.mass[0]) / 0.005;
            CHECK(std::abs(dm + b2.outflow[1]) <= 1e-4);
            // upwind density is first order in dr against the series flux
            const double e = std::abs(dm - series.mass_flux(0.5));
            if (prev > 0.0) CHECK(e <= 0.55 * prev);
            CHECK(e <= 1e-2);
            prev = e;
        }
    }

    TEST_CASE("fd: a fixed step above the CFL bound is rejected")
    {
        const auto b = BoundedProblem::ball(GreenCase::Ball3D, 1.0, 0.1, ScalarProfile({0.0}, {{0.0, 0.3}}),
                                            ScalarProfile::constant(1.0), 0.3);
        FDSolverConfig cfg;
        cfg.dt = 0.5;
        cfg.output_times = {1.0};
        CHECK_THROWS_AS(fd_viscous_solve(FdProblem::from_bounded(b), cfg), DataError);
    }

    TEST_CASE("brute force: trivial data and refinement")
    {
        const auto rest = InviscidProblem::make(2, ScalarProfile::constant(0.0), step({0.0, 1.0}, {1.0, 0.0}),
                                                ScalarProfile::constant(0.0), ScalarProfile::constant(0.0));
        const auto z = brute_force_Q(rest, 0.6, 1.0, 60);
        CHECK(z.value == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(z.r0 == doctest::Approx(0.6).epsilon(0.05));
        CHECK_THROWS(brute_force_Q(rest, 0.6, 1.0, 10));

        const auto P = InviscidProblem::make(
            2, ScalarProfile::linear_table(std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>{0.0, -0.4, 0.0}),
            step({0.0, 2.0}, {1.0, 0.0}), step({0.0, 0.5, 1.0}, {0.8, -0.5, 0.6}), ScalarProfile({0.0}, {{10.0, 1.0}}));
        double prev = brute_force_Q(P, 0.7, 1.2, 100).value;
        for (int d : {200, 400, 800}) {
            const double v = brute_force_Q(P, 0.7, 1.2, d).value;
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
        CHECK(prev == doctest::Approx(minimize_paths(P, 0.7, 1.2).value).epsilon(1e-4));
    }

    TEST_CASE("brute force panel matches the pointwise search")
    {
        const auto P = InviscidProblem::make(1, step({0.0, 1.0}, {1.0, -0.5}), step({0.0, 3.0}, {1.0, 0.0}),
                                             ScalarProfile::constant(0.0), ScalarProfile::constant(0.0));
        const auto panel = brute_force_panel(P, {0.5, 1.5}, {1.0}, 500, 2);
        REQUIRE(panel.size() == 2);
        CHECK(panel[1].value == doctest::Approx(minimize_paths(P, 1.5, 1.0).value).epsilon(1e-4));
    }

    TEST_CASE("sticky: two equal particles merge at rest")
    {
        const std::vector<Particle> ps{{1.0, 1.0, 1.0}, {3.0, 1.0, -1.0}};
        const auto run = sticky_particle_run(ps, {0.5, 2.0});
        REQUIRE(run.size() == 2);
        CHECK(run[0].particles.size() == 2);
        REQUIRE(run[1].particles.size() == 1);
        CHECK(run[1].particles[0].r == doctest::Approx(2.0));
        CHECK(run[1].particles[0].m == doctest::Approx(2.0));
        CHECK(run[1].particles[0].v == doctest::Approx(0.0));
    }

    TEST_CASE("sticky: merges conserve mass and momentum")
    {
        const auto q0 = ScalarProfile::linear_table(std::vector<double>{0.0, 1.0, 2.0, 3.0},
                                                    std::vector<double>{0.5, 1.0, -0.8, 0.2});
        const auto init = particles_from_profile(q0, step({0.0, 3.0}, {1.0, 0.0}), 0.5, 3.0, 500);
        const double m0 = total(init, &Particle::m, false), mom0 = total(init, &Particle::v, true);
        CHECK(m0 == doctest::Approx(2.5).epsilon(1e-12));
        const auto run = sticky_particle_run(init, {0.5, 1.0, 2.0});
        for (const auto& s : run) {
            CHECK(total(s.particles, &Particle::m, false) == doctest::Approx(m0).epsilon(1e-13));
            CHECK(total(s.particles, &Particle::v, true) == doctest::Approx(mom0).epsilon(1e-12));
            CHECK(std::is_sorted(s.particles.begin(), s.particles.end(),
                                 [](const Particle& a, const Particle& b) { return a.r < b.r; }));
        }
        CHECK(run.back().particles.size() < init.size());
    }

    TEST_CASE("sticky: the origin absorbs incoming particles")
    {
        const std::vector<Particle> ps{{0.5, 1.0, -1.0}, {2.0, 1.0, 0.5}};
        const auto run = sticky_particle_run(ps, {1.0});
        CHECK(run[0].particles.size() == 1);
        CHECK(run[0].absorbed == doctest::Approx(1.0));
    }

    TEST_CASE("sticky: Riemann cluster follows the delta shock")
    {
        const auto init = particles_from_profile(step({0.0, 1.0}, {1.0, -0.5}), step({0.0, 3.0}, {1.0, 0.0}), 0.0, 3.0,
                                                 3000);
        const auto run = sticky_particle_run(init, {0.5, 1.0});
        for (const auto& s : run) {
            const auto c = heaviest(s);
            CHECK(c.r == doctest::Approx(1.0 + 0.25 * s.t).epsilon(5e-3));
            CHECK(c.m == doctest::Approx(1.5 * s.t).epsilon(5e-3));
        }
        std::ostringstream os;
        write_particle_csv(os, run);
        CHECK(os.str().rfind("t,index,r,m,v\n", 0) == 0);
    }
}
