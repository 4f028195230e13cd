#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "lcgeom/convex.hpp"
#include "lcgeom/errors.hpp"
#include "lcgeom/quadrature.hpp"

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

// Central finite differences of evaluate(); the analytic bundles must agree.
Vec fd_gradient(const ConvexFunctionSpec& s, const Vec& x, double h) {
    Vec g(x.n);
    for (int a = 0; a < x.n; ++a) {
        Vec xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        g[a] = (evaluate(s, xp) - evaluate(s, xm)) / (2.0 * h);
    }
    return g;
}

Mat fd_hessian(const ConvexFunctionSpec& s, const Vec& x, double h) {
    Mat m(x.n);
    for (int a = 0; a < x.n; ++a)
        for (int b = 0; b < x.n; ++b) {
            Vec xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[a] += h; xpp[b] += h;
            xpm[a] += h; xpm[b] -= h;
            xmp[a] -= h; xmp[b] += h;
            xmm[a] -= h; xmm[b] -= h;
            m(a, b) = (evaluate(s, xpp) - evaluate(s, xpm) - evaluate(s, xmp) +
                       evaluate(s, xmm)) / (4.0 * h * h);
        }
    return m;
}

} // namespace

TEST_CASE("quadratic bundles match the closed form") {
    const Mat a = mat2(1.3, 0.4, 0.4, 0.8);
    const Vec b{0.1, -0.2};
    const ConvexFunctionSpec s = ConvexFunctionSpec::quadratic(a, b, 0.3);
    const Vec x{0.7, -1.1};

    const DiffBundle d = differentials(s, x);
    CHECK(d.regular);
    CHECK(d.value == doctest::Approx(0.5 * quadform(a, x) + dot(b, x) + 0.3).epsilon(1e-14));
    const Vec g = matvec(a, x) + b;
    CHECK(d.gradient[0] == doctest::Approx(g[0]).epsilon(1e-14));
    CHECK(d.gradient[1] == doctest::Approx(g[1]).epsilon(1e-14));
    CHECK(d.hessian(0, 1) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(d.hessian_det == doctest::Approx(det(a)).epsilon(1e-14));
    CHECK(d.hessian_logdet == doctest::Approx(std::log(det(a))).epsilon(1e-13));
    CHECK(evaluate(s, x) == doctest::Approx(d.value).epsilon(1e-15));
}

TEST_CASE("finite differences confirm analytic derivatives") {
    const double h = 1e-5;
    const ConvexFunctionSpec specs[] = {
        ConvexFunctionSpec::power_sum(2, 3.0, 0.4, 0.1),
        ConvexFunctionSpec::power_sum(1, 1.5, 1.0),
        ConvexFunctionSpec::gauge_square(BodySpec::pball(2, 4.0, Vec{1.3, 0.7})),
    };
    const Vec points[] = {Vec{0.6, -0.9}, Vec{0.8}, Vec{0.5, 0.4}};
    for (int i = 0; i < 3; ++i) {
        const ConvexFunctionSpec& s = specs[i];
        const Vec& x = points[i];
        const DiffBundle d = differentials(s, x);
        REQUIRE(d.regular);
        const Vec g = fd_gradient(s, x, h);
        const Mat m = fd_hessian(s, x, h);
        for (int a = 0; a < x.n; ++a) {
            CHECK(d.gradient[a] == doctest::Approx(g[a]).epsilon(1e-6));
            for (int b = 0; b < x.n; ++b)
                CHECK(d.hessian(a, b) == doctest::Approx(m(a, b)).epsilon(2e-4));
        }
    }
}

TEST_CASE("kinks of low-exponent power sums are flagged non-regular") {
    const ConvexFunctionSpec s = ConvexFunctionSpec::power_sum(2, 1.5, 1.0);
    CHECK_FALSE(differentials(s, Vec{0.0, 0.5}).regular);
    CHECK(differentials(s, Vec{0.3, 0.5}).regular);
}

TEST_CASE("legendre transform of a quadratic is the dual quadratic") {
    const Mat a = mat2(1.3, 0.4, 0.4, 0.8);
    const Vec b{0.1, -0.2};
    const ConvexFunctionSpec s = ConvexFunctionSpec::quadratic(a, b, 0.3);
    const ConvexFunctionSpec dual = legendre(s);
    CHECK(dual.family == Family::Quadratic);

    const Mat ainv = inverse(a);
    for (const Vec& y : {Vec{0.5, 0.7}, Vec{-1.2, 0.3}, Vec{2.0, -2.0}}) {
        const Vec z = y - b;
        const double expect = 0.5 * quadform(ainv, z) - 0.3;
        CHECK(evaluate(dual, y) == doctest::Approx(expect).epsilon(1e-13));
    }

    const ConvexFunctionSpec bi = legendre(dual);
    for (const Vec& x : {Vec{0.7, -1.1}, Vec{0.0, 0.0}, Vec{1.5, 2.5}})
        CHECK(evaluate(bi, x) == doctest::Approx(evaluate(s, x)).epsilon(1e-13));
}

TEST_CASE("power sums conjugate to the dual exponent") {
    // psi = |x|^3/3 has psi*(y) = (2/3)|y|^{3/2}.
    const ConvexFunctionSpec s = ConvexFunctionSpec::power_sum(1, 3.0, 1.0 / 3.0);
    const ConvexFunctionSpec dual = legendre(s);
    for (double y : {0.3, 1.0, 1.7, 4.0})
        CHECK(evaluate(dual, Vec{y}) ==
              doctest::Approx((2.0 / 3.0) * std::pow(y, 1.5)).epsilon(1e-12));

    // Offsets flip sign under conjugation: (psi + c)* = psi* - c.
    const ConvexFunctionSpec off = ConvexFunctionSpec::power_sum(1, 3.0, 1.0 / 3.0, 0.25);
    CHECK(evaluate(legendre(off), Vec{1.7}) ==
          doctest::Approx((2.0 / 3.0) * std::pow(1.7, 1.5) - 0.25).epsilon(1e-12));
}

TEST_CASE("envelope identity holds on analytic families") {
    const ConvexFunctionSpec specs[] = {
        ConvexFunctionSpec::quadratic(mat2(1.3, 0.4, 0.4, 0.8), Vec{0.1, -0.2}, 0.3),
        ConvexFunctionSpec::power_sum(1, 3.0, 1.0 / 3.0),
        ConvexFunctionSpec::power_sum(1, 1.5, 1.0),
        ConvexFunctionSpec::power_sum(1, 4.0, 0.25),
        ConvexFunctionSpec::gauge_square(BodySpec::ellipsoid(Mat::diag(Vec{0.25, 1.0}))),
    };
    for (const ConvexFunctionSpec& s : specs) {
        const double dev = envelope_check(s, sample_points(s, 512, 1));
        CHECK(dev <= 1e-7);
    }
}

TEST_CASE("tabulated gaussian reproduces values, derivatives and duals") {
    const ConvexFunctionSpec g1 = ConvexFunctionSpec::standard_gaussian(1);
    const GridFunction grid = tabulate(g1, Vec{-8.0}, Vec{8.0}, {161, 1, 1});
    CHECK(grid.value_at(Vec{0.37}) == doctest::Approx(0.5 * 0.37 * 0.37).epsilon(1e-12));

    const ConvexFunctionSpec tab = ConvexFunctionSpec::tabulated(grid);
    const DiffBundle d = differentials(tab, Vec{1.23});
    REQUIRE(d.regular);
    CHECK(d.gradient[0] == doctest::Approx(1.23).epsilon(1e-8));
    CHECK(d.hessian(0, 0) == doctest::Approx(1.0).epsilon(1e-5));

    const GridFunction dual = discrete_legendre(grid);
    CHECK(dual.value_at(Vec{0.5}) == doctest::Approx(0.125).epsilon(1e-6));

    const GridFunction g2 = tabulate(ConvexFunctionSpec::standard_gaussian(2),
                                     Vec{-6.0, -6.0}, Vec{6.0, 6.0}, {41, 41, 1});
    CHECK(g2.value_at(Vec{0.7, -1.1}) ==
          doctest::Approx(0.5 * (0.7 * 0.7 + 1.1 * 1.1)).epsilon(1e-12));
}

TEST_CASE("grid validation rejects bad input") {
    std::vector<double> vals(8, 0.0);
    CHECK_THROWS_AS(GridFunction::create(1, Vec{-1.0}, Vec{1.0}, {8, 1, 1}, vals),
                    GridError);

    std::vector<double> bump(33);
    for (int i = 0; i < 33; ++i) {
        const double x = -4.0 + 0.25 * i;
        bump[size_t(i)] = std::sin(1.7 * x); // not convex
    }
    CHECK_THROWS_AS(GridFunction::create(1, Vec{-4.0}, Vec{4.0}, {33, 1, 1}, bump),
                    GridError);

    const GridFunction ok = tabulate(ConvexFunctionSpec::standard_gaussian(1),
                                     Vec{-4.0}, Vec{4.0}, {33, 1, 1});
    CHECK(ok.value_at(Vec{5.0}) == std::numeric_limits<double>::infinity());
    CHECK_FALSE(ok.inside(Vec{4.5}));
}

TEST_CASE("discrete 1d conjugation is exact on quadratic data") {
    std::vector<double> xs, vs;
    for (int i = 0; i <= 32; ++i) {
        const double x = -4.0 + 0.25 * i;
        xs.push_back(x);
        vs.push_back(0.5 * x * x);
    }
    const std::vector<double> ys = {-2.0, -0.7, 0.0, 0.31, 1.9};
    const std::vector<double> conj = conjugate_1d(xs, vs, ys);
    for (size_t i = 0; i < ys.size(); ++i)
        CHECK(conj[i] == doctest::Approx(0.5 * ys[i] * ys[i]).epsilon(1e-12));

    // sup(xy - |x|) = 0 for |y| <= 1, but the parabolic refinement fits
    // x^2/h through the kink at 0, overshooting by exactly y^2 h / 4.
    std::vector<double> av;
    for (double x : xs) av.push_back(std::abs(x));
    const std::vector<double> qs = {-0.9, 0.0, 0.5};
    const std::vector<double> cav = conjugate_1d(xs, av, qs);
    for (size_t i = 0; i < qs.size(); ++i) {
        CHECK(cav[i] >= -1e-15);
        CHECK(cav[i] <= qs[i] * qs[i] * 0.25 / 4.0 + 1e-12);
    }
}

TEST_CASE("translated and linear images evaluate through the base") {
    const ConvexFunctionSpec base =
        ConvexFunctionSpec::quadratic(mat2(1.3, 0.4, 0.4, 0.8), Vec{0.1, -0.2}, 0.3);
    const Vec shift{0.5, -0.25};
    const ConvexFunctionSpec moved = ConvexFunctionSpec::translated(base, shift);
    CHECK(moved.family == Family::Quadratic);
    for (const Vec& x : {Vec{0.3, 0.9}, Vec{-1.0, 0.2}})
        CHECK(evaluate(moved, x) == doctest::Approx(evaluate(base, x + shift)).epsilon(1e-13));

    const Mat s = mat2(1.2, 0.3, 0.3, (1.0 + 0.09) / 1.2); // det = 1
    const ConvexFunctionSpec img = ConvexFunctionSpec::linear_image(base, s);
    for (const Vec& x : {Vec{0.3, 0.9}, Vec{-1.0, 0.2}})
        CHECK(evaluate(img, x) == doctest::Approx(evaluate(base, matvec(s, x))).epsilon(1e-13));
    CHECK(envelope_check(img, sample_points(img, 256, 3)) <= 1e-7);
}
