#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lcgeom/convex.hpp"
#include "lcgeom/errors.hpp"
#include "lcgeom/quadrature.hpp"
#include "oracles.hpp"

using namespace lcgeom;

namespace {

Mat mat2(double a00, double a01, double a10, double a11) {
    Mat m(2);
    m(0, 0) = a00;
    m(0, 1) = a01;
    m(1, 0) = a10;
    m(1, 1) = a11;
    return m;
}

// int e^{-<Ax,x>/2 - <b,x> - c} = (2 pi)^{n/2} det(A)^{-1/2} e^{<A^{-1}b,b>/2 - c}
double gaussian_mass(const Mat& a, const Vec& b, double c) {
    const double n = a.n;
    return std::pow(2.0 * M_PI, 0.5 * n) / std::sqrt(det(a)) *
           std::exp(0.5 * quadform(inverse(a), b) - c);
}

} // namespace

TEST_CASE("gaussian masses at all supported dimensions") {
    const QuadratureSpec quad = QuadratureSpec::gauss(64);

    const ConvexFunctionSpec g1 = ConvexFunctionSpec::standard_gaussian(1);
    CHECK(mass(g1, quad).value == doctest::Approx(oracle::kSqrt2Pi).epsilon(1e-12));

    const Mat a2 = mat2(1.3, 0.4, 0.4, 0.8);
    const ConvexFunctionSpec g2 = ConvexFunctionSpec::quadratic(a2);
    CHECK(mass(g2, quad).value ==
          doctest::Approx(gaussian_mass(a2, Vec::zero(2), 0.0)).epsilon(1e-10));

    const Vec b{0.7};
    const ConvexFunctionSpec s1 = ConvexFunctionSpec::quadratic(Mat::identity(1), b, 0.3);
    CHECK(mass(s1, quad).value ==
          doctest::Approx(gaussian_mass(Mat::identity(1), b, 0.3)).epsilon(1e-10));

    const Mat a3 = Mat::diag(Vec{1.0, 2.0, 0.5});
    const ConvexFunctionSpec g3 = ConvexFunctionSpec::quadratic(a3);
    CHECK(mass(g3, QuadratureSpec::gauss(48)).value ==
          doctest::Approx(gaussian_mass(a3, Vec::zero(3), 0.0)).epsilon(1e-9));
}

TEST_CASE("barycenter finds the mean of a shifted gaussian") {
    const QuadratureSpec quad = QuadratureSpec::gauss(64);
    const Vec shift{0.4, -0.7};
    const ConvexFunctionSpec s =
        ConvexFunctionSpec::translated(ConvexFunctionSpec::standard_gaussian(2), shift);
    const Vec c = barycenter(s, quad);
    // psi(x + shift) concentrates e^{-psi} around -shift.
    CHECK(c[0] == doctest::Approx(-shift[0]).epsilon(1e-8));
    CHECK(c[1] == doctest::Approx(-shift[1]).epsilon(1e-8));
}

TEST_CASE("entropy of gaussian densities") {
    const QuadratureSpec quad = QuadratureSpec::gauss(64);
    CHECK(entropy(ConvexFunctionSpec::standard_gaussian(1), quad) ==
          doctest::Approx(ent_gaussian(1)).epsilon(1e-10));
    CHECK(entropy(ConvexFunctionSpec::standard_gaussian(2), quad) ==
          doctest::Approx(ent_gaussian(2)).epsilon(1e-10));

    // Covariance A^{-1}: entropy = ent_gaussian + (1/2) ln det A.
    const Mat a = Mat::diag(Vec{4.0, 1.0});
    CHECK(entropy(ConvexFunctionSpec::quadratic(a), quad) ==
          doctest::Approx(ent_gaussian(2) + 0.5 * std::log(4.0)).epsilon(1e-9));
}

TEST_CASE("monte carlo mass agrees with gauss within three sigma") {
    const Mat a2 = mat2(1.3, 0.4, 0.4, 0.8);
    const ConvexFunctionSpec g2 = ConvexFunctionSpec::quadratic(a2);
    const double exact = gaussian_mass(a2, Vec::zero(2), 0.0);
    const IntegralResult mc = mass(g2, QuadratureSpec::monte_carlo(200000, 20260825));
    CHECK(mc.error_estimate > 0.0);
    CHECK(std::abs(mc.value - exact) <= 3.0 * mc.error_estimate + 1e-9);

    // Same seed, same estimate; different seed, different estimate.
    const IntegralResult again = mass(g2, QuadratureSpec::monte_carlo(200000, 20260825));
    CHECK(mc.value == again.value);
    const IntegralResult other = mass(g2, QuadratureSpec::monte_carlo(200000, 7));
    CHECK(mc.value != other.value);
}

TEST_CASE("adaptive refinement reaches a tight target on a kinked family") {
    const ConvexFunctionSpec cubic = ConvexFunctionSpec::power_sum(1, 3.0, 1.0 / 3.0);
    const IntegralResult r = mass(cubic, QuadratureSpec::adaptive(32, 1e-10));
    CHECK(r.value == doctest::Approx(oracle::kMassCubic).epsilon(1e-9));
    CHECK(std::abs(r.value - oracle::kMassCubic) <=
          3.0 * r.error_estimate + 1e-8 * oracle::kMassCubic);

    const ConvexFunctionSpec quartic = ConvexFunctionSpec::power_sum(1, 4.0, 0.25);
    CHECK(mass(quartic, QuadratureSpec::gauss(64)).value ==
          doctest::Approx(oracle::kMassQuartic).epsilon(1e-9));
}

TEST_CASE("suggested radius tracks the decay profile") {
    const double r = suggest_radius(1, [](const Vec& x) { return -0.5 * x[0] * x[0]; }, 40.0);
    CHECK(r >= std::sqrt(80.0) * 0.99);
    CHECK(r <= std::sqrt(80.0) * 1.2 + 6.0);

    const double inf_r = suggest_radius(1, [](const Vec& x) { return x[0] * x[0]; }, 40.0);
    CHECK(std::isinf(inf_r));
}

TEST_CASE("divergent integrands are rejected") {
    // e^{-psi} against envelope +|x| never decays.
    const ConvexFunctionSpec g1 = ConvexFunctionSpec::standard_gaussian(1);
    Integrand g;
    g.needs_derivatives = false;
    g.f = [](const Vec&, const DiffBundle&) { return 1.0; };
    g.log_envelope = [](const Vec& x) { return std::abs(x[0]); };
    CHECK_THROWS_AS(weighted_integral(g1, g, QuadratureSpec::gauss(64)), NumericalError);
}

TEST_CASE("sample points are deterministic and live in the decay box") {
    const ConvexFunctionSpec g2 = ConvexFunctionSpec::standard_gaussian(2);
    const std::vector<Vec> a = sample_points(g2, 64, 7);
    const std::vector<Vec> b = sample_points(g2, 64, 7);
    REQUIRE(a.size() == b.size());
    REQUIRE(int(a.size()) == 64);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i][0] == b[i][0]);
        CHECK(a[i][1] == b[i][1]);
        CHECK(std::abs(a[i][0]) < 50.0);
        CHECK(std::abs(a[i][1]) < 50.0);
    }
}

TEST_CASE("tensor gauss refuses too few nodes") {
    const ConvexFunctionSpec g1 = ConvexFunctionSpec::standard_gaussian(1);
    CHECK_THROWS_AS(mass(g1, QuadratureSpec::gauss(16)), ParameterError);
}
