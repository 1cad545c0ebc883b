#include "zpgd/errors.hpp"
#include "zpgd/specfun.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace zpgd;

namespace {

// Frozen with mpmath (30 digits): Bessel zeros and roots of the Robin
// determinant assembled from the two radial solutions of the ODE.
constexpr std::array<double, 5> kJ1Zeros{3.83170597020751231561, 7.01558666981561875354, 10.1734681350627220772,
                                         13.3236919363142230324, 16.4706300508776328126};

void check_roots(const EigenProblem& p, const std::vector<double>& expected)
{
    const auto list = find_eigenvalues(p, static_cast<int>(expected.size()));
    REQUIRE(list.values.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(list.values[i] == doctest::Approx(expected[i]).epsilon(1e-12));
        CHECK(std::abs(list.residuals[i]) <= 1e-10);
    }
}

}  // namespace

TEST_SUITE("specfun")
{
    TEST_CASE("Bessel values")
    {
        CHECK(bessel(BesselKind::J, 0, 0.0) == 1.0);
        CHECK(bessel(BesselKind::J, 0, 2.5) == doctest::Approx(-0.04838377646819799633).epsilon(1e-14));
        CHECK(bessel(BesselKind::J, 1, 2.5) == doctest::Approx(0.49709410246427403801).epsilon(1e-14));
        CHECK(bessel(BesselKind::Y, 0, 2.5) == doctest::Approx(0.49807035961523188787).epsilon(1e-14));
        CHECK(bessel(BesselKind::Y, 1, 2.5) == doctest::Approx(0.14591813796678579888).epsilon(1e-14));
        CHECK(bessel(BesselKind::Y, 0, 1e-3) == doctest::Approx(-4.4714166113759232557).epsilon(1e-13));
        CHECK(bessel_i(0, 1.0) == doctest::Approx(1.26606587775200833560).epsilon(1e-14));
        CHECK(bessel_i(1, 1.0) == doctest::Approx(0.56515910399248502721).epsilon(1e-14));
        CHECK(bessel_k(0, 1.0) == doctest::Approx(0.42102443824070833334).epsilon(1e-14));
        CHECK(bessel_k(1, 1.0) == doctest::Approx(0.60190723019723457474).epsilon(1e-14));
    }

    TEST_CASE("Bessel domain errors")
    {
        CHECK_THROWS_AS(bessel(BesselKind::Y, 0, 0.0), DomainError);
        CHECK_THROWS_AS(bessel(BesselKind::Y, 1, -1.0), DomainError);
        CHECK_THROWS_AS(bessel(BesselKind::J, 0, -0.5), DomainError);
        CHECK_THROWS_AS(bessel(BesselKind::J, 2, 1.0), DomainError);
    }

    TEST_CASE("case names round-trip")
    {
        for (auto c : {GreenCase::Ball2D, GreenCase::Ball3D, GreenCase::Annulus2D, GreenCase::Annulus3D})
            CHECK(green_case_from_string(to_string(c)) == c);
        CHECK(dimension_of(GreenCase::Annulus3D) == 3);
        CHECK(is_ball(GreenCase::Ball2D));
        CHECK_FALSE(is_ball(GreenCase::Annulus2D));
    }

    TEST_CASE("Ball2D with a closed wall gives the J1 zeros")
    {
        check_roots(EigenProblem::ball(GreenCase::Ball2D, 1.0, 0.0, 0.1),
                    std::vector<double>(kJ1Zeros.begin(), kJ1Zeros.end()));
        CHECK(EigenProblem::ball(GreenCase::Ball2D, 1.0, 0.0, 0.1).has_zero_mode());
    }

    TEST_CASE("Robin roots against the ODE determinant")
    {
        // k = q / eps = 0.5
        check_roots(EigenProblem::ball(GreenCase::Ball2D, 1.0, 0.05, 0.1),
                    {0.940770563949737353649, 3.95937118501257419533, 7.08638084796173079277, 10.2224583966386901491});
        check_roots(EigenProblem::ball(GreenCase::Ball3D, 1.0, 0.05, 0.1),
                    {1.16556118520721130683, 4.60421677720057651460, 7.78988375114457277367, 10.9499436485411593332});
        // k = 2 crosses the pole structure of mu cot mu
        check_roots(EigenProblem::ball(GreenCase::Ball3D, 1.0, 0.2, 0.1),
                    {2.02875783811043422358, 4.91318043943488368884, 7.97866571241324075525, 11.0855384064970225434});
        // k1 = -0.5 at R1 = 0.5, k2 = 0.3 at R2 = 1
        check_roots(EigenProblem::annulus(GreenCase::Annulus2D, 0.5, 1.0, -0.05, 0.03, 0.1),
                    {1.19182666330930362707, 6.62428618658341618264, 12.7486070613427882743, 18.9727670226516201925});
        check_roots(EigenProblem::annulus(GreenCase::Annulus3D, 0.5, 1.0, -0.05, 0.03, 0.1),
                    {1.18958222927867877497, 6.78370892998179021270, 12.8419990006266017889, 19.0371981275211452476});
    }

    TEST_CASE("halving the scan step leaves the roots unchanged")
    {
        for (const auto& p : {EigenProblem::ball(GreenCase::Ball3D, 1.0, 0.05, 0.1),
                              EigenProblem::annulus(GreenCase::Annulus2D, 0.5, 1.0, -0.05, 0.03, 0.1)}) {
            const auto coarse = find_eigenvalues(p, 8);
            const auto fine = find_eigenvalues(p, 8, ScanOptions{p.root_spacing() / 80.0, 0.0});
            REQUIRE(fine.values.size() == coarse.values.size());
            for (std::size_t i = 0; i < fine.values.size(); ++i)
                CHECK(fine.values[i] == doctest::Approx(coarse.values[i]).epsilon(1e-13));
        }
    }

    TEST_CASE("Ball3D characteristic function has poles, the scan form does not")
    {
        const auto p = EigenProblem::ball(GreenCase::Ball3D, 1.0, 0.05, 0.1);
        CHECK_FALSE(characteristic_value(p, std::acos(-1.0)).has_value());
        CHECK_FALSE(characteristic_value(p, 3.0 * std::acos(-1.0)).has_value());
        CHECK(characteristic_value(p, 3.0).has_value());
        CHECK(std::isfinite(scan_value(p, std::acos(-1.0))));
    }

    TEST_CASE("growing modes appear only under inflow")
    {
        CHECK(find_growing_modes(EigenProblem::ball(GreenCase::Ball3D, 1.0, 0.05, 0.1)).empty());
        // kappa coth kappa = 1 - kR = 3
        const auto g3 = find_growing_modes(EigenProblem::ball(GreenCase::Ball3D, 1.0, -0.2, 0.1));
        REQUIRE(g3.size() == 1);
        CHECK(g3[0] == doctest::Approx(2.98470458535788681556).epsilon(1e-12));
        // kappa I1 / I0 = -kR = 2
        const auto g2 = find_growing_modes(EigenProblem::ball(GreenCase::Ball2D, 1.0, -0.2, 0.1));
        REQUIRE(g2.size() == 1);
        CHECK(g2[0] == doctest::Approx(2.58439962588164903951).epsilon(1e-12));
    }

    TEST_CASE("invalid geometry")
    {
        CHECK_THROWS(EigenProblem::ball(GreenCase::Ball2D, -1.0, 0.0, 0.1).validate());
        CHECK_THROWS(EigenProblem::annulus(GreenCase::Annulus3D, 1.0, 0.5, 0.0, 0.0, 0.1).validate());
        CHECK_THROWS(EigenProblem::ball(GreenCase::Ball2D, 1.0, 0.0, 0.0).validate());
    }
}
