#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>

#include "lcgeom/errors.hpp"
#include "lcgeom/report_io.hpp"
#include "lcgeom/serialization.hpp"
#include "oracles.hpp"

using namespace lcgeom;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("function specs round trip through json") {
    Mat a(2);
    a(0, 0) = 1.3;
    a(0, 1) = a(1, 0) = 0.4;
    a(1, 1) = 0.8;
    const ConvexFunctionSpec specs[] = {
        ConvexFunctionSpec::quadratic(a, Vec{0.1, -0.2}, 0.3),
        ConvexFunctionSpec::power_sum(1, 3.0, 1.0 / 3.0, 0.25),
        ConvexFunctionSpec::gauge_square(BodySpec::ellipsoid(Mat::diag(Vec{0.25, 1.0}))),
        ConvexFunctionSpec::tabulated(tabulate(ConvexFunctionSpec::standard_gaussian(1),
                                               Vec{-4.0}, Vec{4.0}, {33, 1, 1})),
    };
    for (const ConvexFunctionSpec& s : specs) {
        const Json j = to_json(s);
        CHECK(to_json(spec_from_json(j)) == j);
    }
    const Json q = to_json(specs[0]);
    const ConvexFunctionSpec back = spec_from_json(q);
    CHECK(back.family == Family::Quadratic);
    CHECK(back.a(0, 1) == 0.4);
    CHECK(back.c == 0.3);
}

TEST_CASE("body specs round trip through json") {
    const BodySpec bodies[] = {
        BodySpec::ellipsoid(Mat::diag(Vec{0.25, 1.0})),
        BodySpec::pball(2, 4.0, Vec{1.0, 1.0}),
        BodySpec::perturbed_sphere(2, 0.1, {0.0, 0.6}, {0.0, 0.0, 0.4}),
    };
    for (const BodySpec& b : bodies) {
        const Json j = to_json(b);
        CHECK(to_json(body_from_json(j)) == j);
    }
}

TEST_CASE("quadrature and generator specs round trip") {
    for (const QuadratureSpec& q :
         {QuadratureSpec::gauss(48, 5.0), QuadratureSpec::monte_carlo(5000, 11),
          QuadratureSpec::adaptive(32, 1e-9)}) {
        const Json j = to_json(q);
        CHECK(to_json(quad_from_json(j)) == j);
    }
    for (const DivergenceGenerator& g :
         {DivergenceGenerator::neg_log(), DivergenceGenerator::t_log_t(),
          DivergenceGenerator::abs_dev(), DivergenceGenerator::power(0.5)}) {
        const Json j = to_json(g);
        const DivergenceGenerator back = generator_from_json(j);
        CHECK(back.name == g.name);
        CHECK(back.lam == g.lam);
        CHECK(to_json(back) == j);
    }
}

TEST_CASE("grids round trip through json") {
    const GridFunction g = tabulate(ConvexFunctionSpec::standard_gaussian(2),
                                    Vec{-3.0, -3.0}, Vec{3.0, 3.0}, {17, 21, 1});
    const Json j = to_json(g);
    const GridFunction back = grid_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.value_at(Vec{0.4, -0.9}) ==
          doctest::Approx(g.value_at(Vec{0.4, -0.9})).epsilon(1e-14));
}

TEST_CASE("in memory families and malformed input are rejected") {
    // Quadratic bases rewrite in-family under linear_image, so use a power
    // sum to force a genuine affine-image node.
    const ConvexFunctionSpec base = ConvexFunctionSpec::power_sum(2, 3.0, 0.5);
    const ConvexFunctionSpec image =
        ConvexFunctionSpec::linear_image(base, Mat::identity(2));
    CHECK(image.family == Family::AffineImage);
    CHECK_THROWS_AS(to_json(image), ConfigError);
    CHECK_THROWS_AS(to_json(BodySpec::polar_of(BodySpec::pball(2, 2.0, Vec{1.0, 1.0}))),
                    ConfigError);
    CHECK_THROWS_AS(spec_from_json(Json{{"family", "mystery"}, {"dim", 1}}), ConfigError);
    CHECK_THROWS_AS(spec_from_json(Json{{"family", "powersum"},
                                        {"dim", 1},
                                        {"params", Json::object()}}),
                    ConfigError);
    CHECK_THROWS_AS(quad_preset("super-fine"), ConfigError);
    CHECK(quad_preset("gauss-fine").nodes == 96);
    CHECK(quad_preset("gauss").nodes == 64);
}

TEST_CASE("non finite numbers take the string spelling") {
    CHECK(json_number(kInf) == Json("inf"));
    CHECK(json_number(-kInf) == Json("-inf"));
    CHECK(json_number(std::nan("")) == Json("nan"));
    CHECK(json_number(0.5) == Json(0.5));
    CHECK(number_from_json(Json("inf")) == kInf);
    CHECK(number_from_json(Json("-inf")) == -kInf);
    CHECK(std::isnan(number_from_json(Json("nan"))));
    CHECK(number_from_json(Json(0.5)) == 0.5);
    CHECK_THROWS_AS(number_from_json(Json("three")), ConfigError);
}

TEST_CASE("formatted numbers parse back to the same bits") {
    for (double v : {0.1, 1.0 / 3.0, oracle::kMassCubic, 1e-300, 12345.678901234567,
                     -2.5066282746310002, 0.0}) {
        const std::string s = format_number(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_number(kInf) == "inf");
    CHECK(format_number(-kInf) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("csv fields follow rfc 4180 quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("with,comma") == "\"with,comma\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("line\nbreak") == "\"line\nbreak\"");
    CHECK(csv_field("") == "");
}

TEST_CASE("report tables carry a fixed header and crlf rows") {
    InequalityReport r = make_report("demo", 1.0, 2.0, 1e-9);
    r.note = "a,b";
    const std::string csv = reports_to_csv({r});
    CHECK(csv.rfind("name,lhs,rhs,slack,tolerance,eq_tolerance,verdict,note\r\n", 0) == 0);
    CHECK(csv.find("demo,1,2,1") != std::string::npos);
    CHECK(csv.find("PASS") != std::string::npos);
    CHECK(csv.find("\"a,b\"") != std::string::npos);
    CHECK(csv.substr(csv.size() - 2) == "\r\n");

    const std::string sweep = sweep_to_csv({{0.5, 1.25, 1e-12}});
    CHECK(sweep.rfind("parameter,value,error_estimate\r\n", 0) == 0);
    CHECK(sweep.find("0.5,1.25,") != std::string::npos);
}

TEST_CASE("reports round trip through json including infinities") {
    InequalityReport r = make_report("kl_upper_gradient", 0.5, kInf, 0.0, "vacuous");
    r.terms["as_0"] = 2.5;
    const Json j = report_to_json(r);
    const InequalityReport back = report_from_json(j);
    CHECK(back.name == r.name);
    CHECK(back.lhs == r.lhs);
    CHECK(back.rhs == kInf);
    CHECK(back.slack == kInf);
    CHECK(back.verdict == Verdict::Pass);
    // make_report appends its vacuous-bound explanation to the caller note.
    CHECK(back.note == r.note);
    CHECK(back.note.rfind("vacuous", 0) == 0);
    CHECK(back.terms.at("as_0") == 2.5);
    CHECK(report_to_json(back) == j);

    CHECK_THROWS(report_from_json(Json{{"name", "x"}}));
}
