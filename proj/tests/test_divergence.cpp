#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "lcgeom/divergence.hpp"
#include "lcgeom/errors.hpp"

using namespace lcgeom;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Mat mat2(double a00, double a01, double a10, double a11) {
    Mat m(2);
    m(0, 0) = a00;
    m(0, 1) = a01;
    m(1, 0) = a10;
    m(1, 1) = a11;
    return m;
}

// as_lambda of a centered gaussian <Ax,x>/2: (2 pi)^{n/2} det(A)^{lambda - 1/2}.
double gaussian_as(const Mat& a, double lambda) {
    return std::pow(2.0 * M_PI, 0.5 * a.n) * std::pow(det(a), lambda - 0.5);
}

const QuadratureSpec kQuad = QuadratureSpec::gauss(64);

} // namespace

TEST_CASE("gaussian affine surface areas follow the closed form") {
    const Mat mats[] = {mat2(1.3, 0.4, 0.4, 0.8), Mat::diag(Vec{2.0, 0.5}),
                        Mat::diag(Vec{2.0})};
    for (const Mat& a : mats) {
        const ConvexFunctionSpec s = ConvexFunctionSpec::quadratic(a);
        for (double lam : {-2.0, -1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 2.0, 3.0}) {
            const IntegralResult r = affine_surface_area(s, lam, kQuad);
            CHECK(r.value == doctest::Approx(gaussian_as(a, lam)).epsilon(1e-9));
        }
    }
}

TEST_CASE("power generator divergence equals the surface area integral") {
    const ConvexFunctionSpec g = ConvexFunctionSpec::quadratic(mat2(1.3, 0.4, 0.4, 0.8));
    const double via_div = f_divergence(g, DivergenceGenerator::power(0.7), kQuad).value;
    const double via_as = affine_surface_area(g, 0.7, kQuad).value;
    CHECK(via_div == doctest::Approx(via_as).epsilon(1e-10));

    const ConvexFunctionSpec cubic = ConvexFunctionSpec::power_sum(1, 3.0, 1.0 / 3.0);
    const QuadratureSpec fine = QuadratureSpec::adaptive(64, 1e-9);
    CHECK(f_divergence(cubic, DivergenceGenerator::power(0.5), fine).value ==
          doctest::Approx(affine_surface_area(cubic, 0.5, fine).value).epsilon(1e-6));
}

TEST_CASE("kl divergence of a rescaled gaussian") {
    // psi = 2x^2: ratio p/q = det A = 4 everywhere, so D_KL(Q||P) = -ln 4 * mass
    // and the normalized divergence vanishes.
    const ConvexFunctionSpec s = ConvexFunctionSpec::quadratic(Mat::diag(Vec{4.0}));
    const double m0 = mass(s, kQuad).value;
    CHECK(kl_divergence(s, kQuad).value ==
          doctest::Approx(-std::log(4.0) * m0).epsilon(1e-10));
    CHECK(std::abs(kl_divergence(s, kQuad, true).value) <= 1e-10);
    CHECK(total_variation(s, kQuad).value <= 1e-10);
}

TEST_CASE("report verdicts follow the tolerance ladder") {
    CHECK(make_report("a", 0.0, 1.0, 1e-12).verdict == Verdict::Pass);
    CHECK(make_report("b", 1.0, 0.0, 1e-12).verdict == Verdict::Fail);
    CHECK(make_report("c", 1.0, 1.0 + 1e-9, 1e-12).verdict == Verdict::Equality);
    CHECK(make_report("d", 1.0, kInf, 0.0).verdict == Verdict::Pass);
    CHECK(make_report("e", -kInf, 1.0, 0.0).verdict == Verdict::Pass);
    const InequalityReport both = make_report("f", kInf, kInf, 0.0);
    CHECK(both.verdict == Verdict::Pass);
    CHECK(both.slack == 0.0);
    CHECK(make_report("g", kInf, 1.0, 0.0).verdict == Verdict::Fail);
    CHECK(make_report("h", std::nan(""), 1.0, 0.0).verdict == Verdict::Fail);

    // err widens both the failure tolerance and the equality band.
    CHECK(make_report("i", 1.0, 1.0 - 2e-5, 1e-5).verdict == Verdict::Equality);
    CHECK(make_report("j", 1.0, 1.0 - 2e-5, 1e-6).verdict == Verdict::Fail);

    // Concave generators flip the claimed order.
    CHECK(oriented_report("k", 1.0, 2.0, 1e-12, -1).verdict == Verdict::Fail);
    CHECK(oriented_report("l", 2.0, 1.0, 1e-12, -1).verdict == Verdict::Pass);
    CHECK(oriented_report("m", std::nan(""), 1.0, 0.0, +1).verdict == Verdict::Skipped);
}

TEST_CASE("jensen bound is tight exactly when the density ratio is constant") {
    // Centered gaussian, det != 1: ratio constant, equality.
    const ConvexFunctionSpec centered = ConvexFunctionSpec::quadratic(Mat::diag(Vec{2.0, 1.0}));
    for (const DivergenceGenerator& g :
         {DivergenceGenerator::neg_log(), DivergenceGenerator::t_log_t(),
          DivergenceGenerator::power(2.0), DivergenceGenerator::power(0.5),
          DivergenceGenerator::abs_dev()}) {
        const InequalityReport r = check_divergence_bound(centered, g, kQuad);
        CHECK(r.verdict == Verdict::Equality);
    }

    // Shifted gaussian: ratio e^{<b,x>} varies, strict inequality.
    const ConvexFunctionSpec shifted =
        ConvexFunctionSpec::quadratic(Mat::identity(1), Vec{0.8});
    const InequalityReport strict =
        check_divergence_bound(shifted, DivergenceGenerator::neg_log(), kQuad);
    CHECK(strict.verdict == Verdict::Pass);
    CHECK(strict.slack > 0.1);
    // D = 0.64 m0 and the Jensen floor is 0.32 m0 for this shift.
    const double m0 = mass(shifted, kQuad).value;
    CHECK(strict.lhs == doctest::Approx(0.32 * m0).epsilon(1e-8));
    CHECK(strict.rhs == doctest::Approx(0.64 * m0).epsilon(1e-8));
}

TEST_CASE("dragomir bounds bracket the divergence on a shifted gaussian") {
    const ConvexFunctionSpec shifted =
        ConvexFunctionSpec::quadratic(Mat::identity(1), Vec{0.8});
    for (const DivergenceGenerator& g :
         {DivergenceGenerator::neg_log(), DivergenceGenerator::t_log_t(),
          DivergenceGenerator::power(2.0), DivergenceGenerator::power(0.5)}) {
        const std::vector<InequalityReport> rs = check_dragomir(shifted, g, kQuad);
        REQUIRE(rs.size() == 2);
        for (const InequalityReport& r : rs) {
            CHECK(r.verdict == Verdict::Pass);
            CHECK(r.slack > 1e-4);
        }
    }
    CHECK(check_dragomir(shifted, DivergenceGenerator::abs_dev(), kQuad)[0].verdict ==
          Verdict::Skipped);
}

TEST_CASE("divergent integrals surface as extended reals") {
    const ConvexFunctionSpec cubic = ConvexFunctionSpec::power_sum(1, 3.0, 1.0 / 3.0);
    CHECK(as_integrand_finite(cubic, 0.5));
    CHECK_FALSE(as_integrand_finite(cubic, -1.0));
    CHECK_THROWS_AS(affine_surface_area(cubic, -1.0, kQuad), NumericalError);
    CHECK(std::isinf(affine_surface_area_ext(cubic, -1.0, kQuad).value));

    // The gradient upper bound for -ln t needs as_{-1}; it degrades to a
    // vacuous claim rather than a failure.
    const std::vector<InequalityReport> kl = check_kl_bounds(cubic, kQuad);
    bool found = false;
    for (const InequalityReport& r : kl)
        if (r.name == "kl_upper_gradient") {
            found = true;
            CHECK(r.verdict == Verdict::Pass);
            CHECK(std::isinf(r.slack));
            CHECK(r.note.find("vacuous") != std::string::npos);
        }
    CHECK(found);
}

TEST_CASE("generator condition screens the sharpened pinsker bound") {
    CHECK(check_gilardoni_condition(DivergenceGenerator::neg_log()).verdict !=
          Verdict::Fail);
    CHECK(check_gilardoni_condition(DivergenceGenerator::t_log_t()).verdict !=
          Verdict::Fail);
    CHECK(check_gilardoni_condition(DivergenceGenerator::power(3.0)).verdict ==
          Verdict::Fail);

    const ConvexFunctionSpec g1 = ConvexFunctionSpec::standard_gaussian(1);
    CHECK(check_pinsker(g1, DivergenceGenerator::power(3.0), kQuad).verdict ==
          Verdict::Skipped);
    CHECK(check_pinsker(g1, DivergenceGenerator::abs_dev(), kQuad).verdict ==
          Verdict::Skipped);
    CHECK(check_pinsker(g1, DivergenceGenerator::neg_log(), kQuad).verdict ==
          Verdict::Equality);

    const ConvexFunctionSpec cubic = ConvexFunctionSpec::power_sum(1, 3.0, 1.0 / 3.0);
    const InequalityReport strict =
        check_pinsker(cubic, DivergenceGenerator::neg_log(), kQuad);
    CHECK(strict.verdict == Verdict::Pass);
    CHECK(strict.terms.at("total_variation") > 0.05);
}

TEST_CASE("entropy chain is tight at every centered gaussian") {
    for (const Mat& a : {Mat::identity(2), Mat::diag(Vec{4.0, 1.0})}) {
        const ConvexFunctionSpec s = ConvexFunctionSpec::quadratic(a);
        const std::vector<InequalityReport> rs = check_entropy_chain(s, kQuad);
        REQUIRE(rs.size() == 3);
        for (const InequalityReport& r : rs) {
            CHECK(r.verdict == Verdict::Equality);
            CHECK(r.lhs == doctest::Approx(std::log(det(a))).epsilon(1e-6));
        }
    }
    const ConvexFunctionSpec cubic = ConvexFunctionSpec::power_sum(1, 3.0, 1.0 / 3.0);
    for (const InequalityReport& r : check_entropy_chain(cubic, kQuad)) {
        CHECK(r.verdict == Verdict::Pass);
        CHECK(r.slack > 1e-3);
    }
}

TEST_CASE("affine chain equality profile of a non-unimodular gaussian") {
    // psi = x^2: ratio is the constant 2. Jensen-type bounds are tight;
    // tangent-type bounds are strict.
    const ConvexFunctionSpec s = ConvexFunctionSpec::quadratic(Mat::diag(Vec{2.0}));
    for (double lam : {-1.0, 0.5, 2.0}) {
        for (const InequalityReport& r : check_affine_chain(s, lam, kQuad)) {
            if (r.name == "affine_geometric_mean" || r.name == "affine_geometric_half") {
                CHECK(r.verdict == Verdict::Equality);
            } else if (r.name == "affine_gradient_bound" || r.name == "affine_secant_bound") {
                CHECK(r.verdict == Verdict::Pass);
                CHECK(r.slack > 1e-3);
            } else {
                CHECK(r.verdict != Verdict::Fail);
            }
        }
    }
    // Identity gaussian: everything collapses to equality.
    const ConvexFunctionSpec id = ConvexFunctionSpec::standard_gaussian(2);
    for (double lam : {-1.0, 0.0, 0.5, 1.0, 3.0})
        for (const InequalityReport& r : check_affine_chain(id, lam, kQuad))
            CHECK(r.verdict == Verdict::Equality);
}

TEST_CASE("santalo family is tight at centered gaussians") {
    const ConvexFunctionSpec s = ConvexFunctionSpec::quadratic(mat2(1.3, 0.4, 0.4, 0.8));
    for (double lam : {-2.0, -1.0, 0.0, 0.25, 0.5, 0.75, 1.0}) {
        for (const InequalityReport& r : check_santalo_family(s, lam, kQuad)) {
            CHECK(r.verdict == Verdict::Equality);
        }
    }
    // lambda > 1 only evaluates the product floor and duality.
    for (const InequalityReport& r : check_santalo_family(s, 2.0, kQuad))
        CHECK(r.verdict != Verdict::Fail);
}

TEST_CASE("duality identity relates a function and its polar") {
    const ConvexFunctionSpec cubic = ConvexFunctionSpec::power_sum(1, 3.0, 1.0 / 3.0);
    const ConvexFunctionSpec polar = polar_log_concave(cubic);
    for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double lhs = affine_surface_area(cubic, lam, kQuad).value;
        const double rhs = affine_surface_area(polar, 1.0 - lam, kQuad).value;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-5));
    }
}

TEST_CASE("volume preserving self-adjoint images leave the invariants fixed") {
    const ConvexFunctionSpec s = ConvexFunctionSpec::quadratic(mat2(1.3, 0.4, 0.4, 0.8));
    const Mat t = mat2(1.2, 0.3, 0.3, (1.0 + 0.09) / 1.2);
    for (const InequalityReport& r : check_sl_invariance(s, 0.5, t, kQuad)) {
        CHECK(r.verdict == Verdict::Equality);
        CHECK(std::abs(r.slack) <= 1e-6 * std::max(1.0, std::abs(r.lhs)));
    }
}

TEST_CASE("normalization and centering helpers") {
    const ConvexFunctionSpec shifted =
        ConvexFunctionSpec::quadratic(Mat::diag(Vec{2.0, 1.0}), Vec{0.6, -0.3}, 0.2);
    const ConvexFunctionSpec prob = normalized_spec(shifted, kQuad);
    CHECK(mass(prob, kQuad).value == doctest::Approx(1.0).epsilon(1e-10));
    const Vec c = barycenter(auto_centered(shifted, kQuad), kQuad);
    CHECK(std::abs(c[0]) <= 1e-8);
    CHECK(std::abs(c[1]) <= 1e-8);
}
