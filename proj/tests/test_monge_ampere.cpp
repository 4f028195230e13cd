#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lcgeom/divergence.hpp"
#include "lcgeom/monge_ampere.hpp"

using namespace lcgeom;

namespace {

const QuadratureSpec kQuad = QuadratureSpec::gauss(64);

ConvexFunctionSpec sheared_gaussian() {
    Mat a(2);
    a(0, 0) = 1.25;
    a(0, 1) = a(1, 0) = 0.5;
    a(1, 1) = 1.0; // det = 1 exactly
    return ConvexFunctionSpec::quadratic(a);
}

} // namespace

TEST_CASE("gaussians solve the defining equation pointwise") {
    for (const ConvexFunctionSpec& s :
         {ConvexFunctionSpec::standard_gaussian(1), ConvexFunctionSpec::standard_gaussian(2),
          sheared_gaussian()}) {
        const MAResidualField f = ma_residual(s, kQuad);
        CHECK(f.sup_norm <= 1e-8);
        CHECK(f.l1_norm <= 1e-10 * f.mass);
        CHECK(f.equality);
        CHECK(f.c_constant == doctest::Approx(1.0).epsilon(1e-9)); // det A = 1
    }
    // Additive constants only move C, not the residual.
    const ConvexFunctionSpec lifted =
        ConvexFunctionSpec::quadratic(Mat::identity(1), Vec::zero(1), 0.7);
    const MAResidualField f = ma_residual(lifted, kQuad);
    CHECK(f.l1_norm <= 1e-10 * f.mass);
    CHECK(f.equality);
    CHECK(f.c_constant == doctest::Approx(std::exp(1.4)).epsilon(1e-9));
}

TEST_CASE("non centered and non gaussian functions leave a residual") {
    const ConvexFunctionSpec shifted =
        ConvexFunctionSpec::quadratic(Mat::identity(1), Vec{0.8});
    const MAResidualField fs = ma_residual(shifted, kQuad);
    CHECK_FALSE(fs.equality);
    CHECK(fs.l1_norm > 1e-3 * fs.mass);

    const ConvexFunctionSpec cubic = ConvexFunctionSpec::power_sum(1, 3.0, 1.0 / 3.0);
    const MAResidualField fc = ma_residual(cubic, kQuad);
    CHECK_FALSE(fc.equality);
    CHECK(fc.l1_norm > 1e-3 * fc.mass);
}

TEST_CASE("equality flag mirrors the jensen equality case") {
    for (const ConvexFunctionSpec& s :
         {ConvexFunctionSpec::standard_gaussian(1),
          ConvexFunctionSpec::quadratic(Mat::identity(1), Vec{0.8}),
          ConvexFunctionSpec::power_sum(1, 3.0, 1.0 / 3.0)}) {
        const bool jensen_tight =
            check_divergence_bound(s, DivergenceGenerator::neg_log(), kQuad).verdict ==
            Verdict::Equality;
        CHECK(ma_residual(s, kQuad).equality == jensen_tight);
    }
}

TEST_CASE("newton solver keeps the exact solution fixed") {
    const GridFunction exact = tabulate(ConvexFunctionSpec::standard_gaussian(1),
                                        Vec{-8.0}, Vec{8.0}, {801, 1, 1});
    const MASolution sol = solve_ma_1d(exact);
    CHECK(sol.converged);
    CHECK(int(sol.trace.size()) <= 6);
    CHECK(sol.fitted_a == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sol.fit_residual <= 1e-7);
    CHECK(sol.c_constant == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sol.odd_part <= 1e-12);
}

TEST_CASE("all default initials relax to the same quadratic") {
    const UniquenessReport rep = uniqueness_probe(default_ma_initials(401, 8.0, false),
                                                  default_ma_initials(201, 6.0, true));
    CHECK(rep.agree);
    CHECK(rep.note.empty());
    CHECK(rep.max_pairwise <= 1e-4);
    CHECK(rep.max_pairwise_radial <= 1e-4);
    CHECK(rep.max_odd_part <= 1e-6);
    REQUIRE(!rep.line_runs.empty());
    REQUIRE(!rep.radial_runs.empty());
    for (const MASolution& s : rep.line_runs) {
        CHECK(s.converged);
        CHECK(s.fitted_a == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(s.c_constant == doctest::Approx(1.0).epsilon(1e-6));
    }
    for (const MASolution& s : rep.radial_runs) {
        CHECK(s.converged);
        CHECK(s.fitted_a == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("radial solver pins the rotation invariant solution") {
    const GridFunction u0 = tabulate(ConvexFunctionSpec::standard_gaussian(1), Vec{0.0},
                                     Vec{6.0}, {201, 1, 1});
    const MASolution sol = solve_ma_radial(u0);
    CHECK(sol.converged);
    CHECK(sol.fitted_a == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(sol.c_constant == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(sol.fit_residual <= 1e-6);
}

TEST_CASE("gradient map pushes the density onto its dual") {
    const TransportCheck ok =
        pushforward_check(ConvexFunctionSpec::standard_gaussian(1), 20000, 20260825);
    CHECK(ok.pass);
    CHECK(ok.ks <= ok.threshold);
    CHECK(ok.threshold == doctest::Approx(1.63 / std::sqrt(20000.0)).epsilon(1e-12));

    const TransportCheck bad = pushforward_check(
        ConvexFunctionSpec::power_sum(1, 3.0, 1.0 / 3.0), 20000, 20260825);
    CHECK_FALSE(bad.pass);
    CHECK(bad.ks > bad.threshold);

    const TransportCheck flat = pushforward_check(sheared_gaussian(), 4000, 7);
    CHECK(flat.pass);
    CHECK(flat.acceptance > 0.05);

    // Seeded sampling is reproducible.
    const TransportCheck again =
        pushforward_check(ConvexFunctionSpec::standard_gaussian(1), 20000, 20260825);
    CHECK(again.ks == ok.ks);
}
