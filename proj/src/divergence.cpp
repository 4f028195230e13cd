#include "lcgeom/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lcgeom/errors.hpp"

namespace lcgeom {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Equality: return "EQUALITY";
        case Verdict::Fail: return "FAIL";
        case Verdict::Skipped: return "SKIPPED";
    }
    return "UNKNOWN";
}

InequalityReport make_report(std::string name, double lhs, double rhs, double err,
                             std::string note) {
    InequalityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.note = std::move(note);
    auto append = [&](const char* s) {
        if (!r.note.empty()) r.note += "; ";
        r.note += s;
    };

    if (std::isnan(lhs) || std::isnan(rhs)) {
        r.verdict = Verdict::Fail;
        r.slack = std::nan("");
        append("NaN term");
        return r;
    }
    if (std::isinf(lhs) || std::isinf(rhs)) {
        if (lhs == rhs) {
            r.verdict = Verdict::Pass;
            r.slack = 0.0;
            append("both sides infinite; vacuous");
        } else if (rhs == kInf || lhs == -kInf) {
            r.verdict = Verdict::Pass;
            r.slack = kInf;
            append("vacuously true (infinite bound)");
        } else {
            r.verdict = Verdict::Fail;
            r.slack = -kInf;
            append("finite side exceeds infinite side");
        }
        return r;
    }

    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    r.tolerance = 3.0 * err + 1e-12 * scale;
    r.eq_tolerance = std::max(1e-6, 10.0 * err);
    r.slack = rhs - lhs;
    if (r.slack < -r.tolerance) r.verdict = Verdict::Fail;
    else if (std::abs(r.slack) <= r.eq_tolerance) r.verdict = Verdict::Equality;
    else r.verdict = Verdict::Pass;
    return r;
}

InequalityReport skipped_report(std::string name, std::string note) {
    InequalityReport r;
    r.name = std::move(name);
    r.verdict = Verdict::Skipped;
    r.note = std::move(note);
    return r;
}

InequalityReport oriented_report(std::string name, double small, double big, double err,
                                 int convexity, std::string note) {
    if (convexity < 0) std::swap(small, big);
    if (std::isnan(small) || std::isnan(big))
        return skipped_report(std::move(name), "ill-defined: opposite infinities cancel");
    return make_report(std::move(name), small, big, err, std::move(note));
}

double log_density_ratio(const Vec& x, const DiffBundle& d) {
    return 2.0 * d.value - dot(d.gradient, x) + d.hessian_logdet;
}

namespace {

// Kink exponent of the underlying gauge: |x_i|^{p-2} hyperplane factors in
// det hess psi come from p-norm structure. 2 means smooth (no kink).
double kink_power(const BodySpec& body);

double kink_power(const ConvexFunctionSpec& spec) {
    switch (spec.family) {
        case Family::Quadratic: return 2.0;
        case Family::PowerSum: return spec.p;
        case Family::GaugeSquare: return kink_power(*spec.body);
        case Family::Tabulated: return 2.0;
        case Family::AffineImage: return kink_power(*spec.image_base);
    }
    return 2.0;
}

double kink_power(const BodySpec& body) {
    switch (body.family) {
        case BodyFamily::Ellipsoid: return 2.0;
        case BodyFamily::PBall: return body.p;
        case BodyFamily::PerturbedSphere: return 2.0;
        case BodyFamily::PolarWrap: {
            const double p = kink_power(*body.base);
            if (p == 2.0) return 2.0;
            return p / (p - 1.0); // dual exponent
        }
    }
    return 2.0;
}

} // namespace

bool as_integrand_finite(const ConvexFunctionSpec& spec, double lambda) {
    if (spec.family == Family::Tabulated) return true; // compact box
    const double p = kink_power(spec);
    if (p == 2.0) return true;
    return (p - 2.0) * lambda > -1.0;
}

IntegralResult affine_surface_area_ext(const ConvexFunctionSpec& spec, double lambda,
                                       const QuadratureSpec& quad) {
    if (!as_integrand_finite(spec, lambda)) return {kInf, 0.0, 1.0};
    if (lambda == 0.0) return mass(spec, quad);

    auto log_weight = [lambda](const Vec& x, const DiffBundle& d) {
        return (2.0 * lambda - 1.0) * d.value - lambda * dot(d.gradient, x) +
               lambda * d.hessian_logdet;
    };
    Integrand g;
    g.needs_derivatives = true;
    g.f = [log_weight](const Vec& x, const DiffBundle& d) { return std::exp(log_weight(x, d)); };
    g.log_envelope = [&spec, log_weight](const Vec& x) {
        const DiffBundle d = differentials(spec, x);
        if (!d.regular) return std::nan("");
        return log_weight(x, d);
    };
    return weighted_integral(spec, g, quad);
}

IntegralResult affine_surface_area(const ConvexFunctionSpec& spec, double lambda,
                                   const QuadratureSpec& quad) {
    if (!as_integrand_finite(spec, lambda))
        throw NumericalError("affine_surface_area: integral diverges at lambda = " +
                             std::to_string(lambda));
    return affine_surface_area_ext(spec, lambda, quad);
}

IntegralResult f_divergence(const ConvexFunctionSpec& spec, const DivergenceGenerator& gen,
                            const QuadratureSpec& quad) {
    Integrand g;
    g.needs_derivatives = true;
    g.f = [&gen](const Vec& x, const DiffBundle& d) {
        return std::exp(-d.value) * gen.eval_log(log_density_ratio(x, d));
    };
    g.log_envelope = [&spec, &gen](const Vec& x) {
        const DiffBundle d = differentials(spec, x);
        if (!d.regular) return std::nan("");
        const double v = gen.eval_log(log_density_ratio(x, d));
        return -d.value + std::log1p(std::abs(v));
    };
    return weighted_integral(spec, g, quad);
}

IntegralResult normalized_f_divergence(const ConvexFunctionSpec& spec,
                                       const DivergenceGenerator& gen,
                                       const QuadratureSpec& quad) {
    const IntegralResult m0 = mass(spec, quad);
    const IntegralResult m1 = affine_surface_area(spec, 1.0, quad);
    const double shift = std::log(m0.value) - std::log(m1.value);

    Integrand g;
    g.needs_derivatives = true;
    g.f = [&gen, shift, &m0](const Vec& x, const DiffBundle& d) {
        return std::exp(-d.value) / m0.value * gen.eval_log(log_density_ratio(x, d) + shift);
    };
    g.log_envelope = [&spec, &gen, shift](const Vec& x) {
        const DiffBundle d = differentials(spec, x);
        if (!d.regular) return std::nan("");
        const double v = gen.eval_log(log_density_ratio(x, d) + shift);
        return -d.value + std::log1p(std::abs(v));
    };
    IntegralResult res = weighted_integral(spec, g, quad);
    // First-order budget for the normalizing masses entering the ratio.
    res.error_estimate += (m0.error_estimate / m0.value + m1.error_estimate / m1.value) *
                          (std::abs(res.value) + 1.0);
    return res;
}

IntegralResult kl_divergence(const ConvexFunctionSpec& spec, const QuadratureSpec& quad,
                             bool normalized) {
    const DivergenceGenerator gen = DivergenceGenerator::neg_log();
    return normalized ? normalized_f_divergence(spec, gen, quad) : f_divergence(spec, gen, quad);
}

IntegralResult total_variation(const ConvexFunctionSpec& spec, const QuadratureSpec& quad) {
    return normalized_f_divergence(spec, DivergenceGenerator::abs_dev(), quad);
}

ConvexFunctionSpec normalized_spec(const ConvexFunctionSpec& spec, const QuadratureSpec& quad) {
    const double log_m = std::log(mass(spec, quad).value);
    ConvexFunctionSpec s = spec;
    switch (spec.family) {
        case Family::Quadratic: s.c += log_m; return s;
        case Family::PowerSum: s.offset += log_m; return s;
        case Family::AffineImage: s.c0 += log_m; return s;
        case Family::GaugeSquare:
            return ConvexFunctionSpec::affine_image(spec, Mat::identity(spec.dim), Vec(spec.dim),
                                                    Vec(spec.dim), log_m);
        case Family::Tabulated: {
            GridFunction g = *spec.grid;
            for (double& v : g.values) v += log_m;
            return ConvexFunctionSpec::tabulated(
                GridFunction::create(g.dim, g.lower, g.upper, g.points, g.values));
        }
    }
    throw ParameterError("normalized_spec: unknown family");
}

ConvexFunctionSpec auto_centered(const ConvexFunctionSpec& spec, const QuadratureSpec& quad) {
    const Vec b = barycenter(spec, quad);
    if (norm(b) < 1e-12) return spec;
    return ConvexFunctionSpec::translated(spec, b);
}

} // namespace lcgeom
