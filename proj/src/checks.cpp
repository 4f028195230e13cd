#include <algorithm>
#include <cmath>
#include <limits>

#include "lcgeom/divergence.hpp"
#include "lcgeom/errors.hpp"

namespace lcgeom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Extended-real scalar multiple with the convention 0 * inf = 0; the checks
// that hit this case (lambda = 0) degenerate to trivially true statements.
double xmul(double s, double a) {
    if (s == 0.0) return 0.0;
    return s * a;
}

double rel(const IntegralResult& r) {
    return r.error_estimate / std::max(std::abs(r.value), 1e-300);
}

} // namespace

InequalityReport check_divergence_bound(const ConvexFunctionSpec& spec,
                                        const DivergenceGenerator& gen,
                                        const QuadratureSpec& quad) {
    const std::string name = "divergence_jensen_" + gen.name;
    const IntegralResult m0 = mass(spec, quad);
    const IntegralResult m1 = affine_surface_area(spec, 1.0, quad);
    const IntegralResult div = gen.shape == GenShape::Power
                                   ? affine_surface_area_ext(spec, gen.lam, quad)
                                   : f_divergence(spec, gen, quad);

    const double tstar = m1.value / m0.value;
    const double jensen = m0.value * gen.eval(tstar);
    double slope = 1.0;
    if (gen.differentiable) slope = std::abs(gen.deriv_log(std::log(tstar)));
    const double err = div.error_estimate + std::abs(gen.eval(tstar)) * m0.error_estimate +
                       slope * (m1.error_estimate + tstar * m0.error_estimate);

    InequalityReport r = oriented_report(name, jensen, div.value, err, gen.convexity,
                                         gen.convexity == 0 ? "linear generator: equality" : "");
    r.terms["as_0"] = m0.value;
    r.terms["as_1"] = m1.value;
    r.terms["f_divergence"] = div.value;
    r.terms["jensen_point"] = tstar;
    return r;
}

namespace {

// D_{f'}(P^2/Q, P) - D_{f'}(P, Q) = int f'(p/q) (p - q). For the power and
// log generators this reduces to affine surface areas, which keeps the
// extended-real bookkeeping exact when one of them diverges; other shapes
// integrate directly and report divergence as +inf.
IntegralResult dragomir_correction(const ConvexFunctionSpec& spec, const DivergenceGenerator& gen,
                                   const QuadratureSpec& quad) {
    if (gen.shape == GenShape::NegLog) {
        const IntegralResult m0 = mass(spec, quad);
        const IntegralResult am1 = affine_surface_area_ext(spec, -1.0, quad);
        return {am1.value - m0.value, am1.error_estimate + m0.error_estimate, 1.0};
    }
    if (gen.shape == GenShape::Power) {
        const IntegralResult a = affine_surface_area_ext(spec, gen.lam, quad);
        const IntegralResult b = affine_surface_area_ext(spec, gen.lam - 1.0, quad);
        return {xmul(gen.lam, a.value - b.value),
                std::abs(gen.lam) * (a.error_estimate + b.error_estimate), 1.0};
    }
    Integrand g;
    g.needs_derivatives = true;
    g.f = [&gen](const Vec& x, const DiffBundle& d) {
        const double lr = log_density_ratio(x, d);
        return gen.deriv_log(lr) * std::expm1(lr) * std::exp(-d.value);
    };
    g.log_envelope = [&spec, &gen](const Vec& x) {
        const DiffBundle d = differentials(spec, x);
        if (!d.regular) return std::nan("");
        const double lr = log_density_ratio(x, d);
        return -d.value + std::log1p(std::abs(gen.deriv_log(lr) * std::expm1(lr)));
    };
    try {
        return weighted_integral(spec, g, quad);
    } catch (const NumericalError&) {
        return {kInf, 0.0, 1.0}; // correction integral does not converge
    }
}

} // namespace

std::vector<InequalityReport> check_dragomir(const ConvexFunctionSpec& spec,
                                             const DivergenceGenerator& gen,
                                             const QuadratureSpec& quad) {
    if (!gen.differentiable)
        return {skipped_report("dragomir_" + gen.name, "generator not differentiable")};

    std::vector<InequalityReport> out;
    {
        InequalityReport lower = check_divergence_bound(spec, gen, quad);
        lower.name = "dragomir_lower_" + gen.name;
        out.push_back(std::move(lower));
    }

    const IntegralResult m0 = mass(spec, quad);
    const IntegralResult div = gen.shape == GenShape::Power
                                   ? affine_surface_area_ext(spec, gen.lam, quad)
                                   : f_divergence(spec, gen, quad);
    const IntegralResult corr = dragomir_correction(spec, gen, quad);
    const double rhs = gen.f1 * m0.value + corr.value;
    const double err = div.error_estimate + std::abs(gen.f1) * m0.error_estimate +
                       corr.error_estimate;
    InequalityReport upper =
        oriented_report("dragomir_upper_" + gen.name, div.value, rhs, err, gen.convexity);
    upper.terms["as_0"] = m0.value;
    upper.terms["f_divergence"] = div.value;
    upper.terms["gradient_correction"] = corr.value;
    out.push_back(std::move(upper));
    return out;
}

InequalityReport check_gilardoni_condition(const DivergenceGenerator& gen, double u_max) {
    const std::string name = "pinsker_condition_" + gen.name;
    if (!gen.differentiable) return skipped_report(name, "generator not differentiable");
    if (gen.convexity <= 0) return skipped_report(name, "generator not convex");
    if (!(gen.fpp1 > 0)) return skipped_report(name, "needs f''(1) > 0");

    const double ratio = gen.fppp1 / (3.0 * gen.fpp1);
    const int samples = 4000;
    const double s_lo = std::log(1e-6), s_hi = std::log(u_max);
    double min_g = kInf, argmin = 1.0;
    for (int i = 0; i < samples; ++i) {
        const double s = s_lo + (s_hi - s_lo) * (i + 0.5) / samples;
        const double u = std::exp(s);
        const double centered = gen.eval_log(s) - gen.f1;
        const double g = (centered - gen.fp1 * (u - 1.0)) * (1.0 - ratio * (u - 1.0)) -
                         0.5 * gen.fpp1 * (u - 1.0) * (u - 1.0);
        if (g < min_g) {
            min_g = g;
            argmin = u;
        }
    }
    InequalityReport r = make_report(name, 0.0, min_g, 0.0,
                                     "min over u of the pointwise Pinsker premise");
    r.terms["argmin_u"] = argmin;
    r.terms["min_value"] = min_g;
    return r;
}

InequalityReport check_pinsker(const ConvexFunctionSpec& spec, const DivergenceGenerator& gen,
                               const QuadratureSpec& quad) {
    const std::string name = "pinsker_" + gen.name;
    const InequalityReport cond = check_gilardoni_condition(gen);
    if (cond.verdict == Verdict::Skipped) return skipped_report(name, cond.note);
    if (cond.verdict == Verdict::Fail)
        return skipped_report(name, "generator condition fails near u = " +
                                        std::to_string(cond.terms.at("argmin_u")));

    const IntegralResult div = normalized_f_divergence(spec, gen, quad);
    const IntegralResult tv = total_variation(spec, quad);
    const double lhs = 0.5 * gen.fpp1 * tv.value * tv.value;
    const double rhs = div.value - gen.f1;
    const double err =
        div.error_estimate + gen.fpp1 * tv.value * tv.error_estimate;
    InequalityReport r = make_report(name, lhs, rhs, err);
    r.terms["normalized_divergence"] = div.value;
    r.terms["total_variation"] = tv.value;
    r.terms["fpp1"] = gen.fpp1;
    return r;
}

std::vector<InequalityReport> check_entropy_chain(const ConvexFunctionSpec& spec,
                                                  const QuadratureSpec& quad) {
    const ConvexFunctionSpec probe = normalized_spec(auto_centered(spec, quad), quad);
    const int n = probe.dim;

    Integrand logdet_g;
    logdet_g.needs_derivatives = true;
    logdet_g.f = [](const Vec&, const DiffBundle& d) {
        return d.hessian_logdet * std::exp(-d.value);
    };
    logdet_g.log_envelope = [&probe](const Vec& x) {
        const DiffBundle d = differentials(probe, x);
        if (!d.regular) return std::nan("");
        return -d.value + std::log1p(std::abs(d.hessian_logdet));
    };
    const IntegralResult lhs = weighted_integral(probe, logdet_g, quad);

    const IntegralResult m = mass(probe, quad);
    Integrand psi_g;
    psi_g.needs_derivatives = false;
    psi_g.f = [](const Vec&, const DiffBundle& d) { return d.value * std::exp(-d.value); };
    const IntegralResult s = weighted_integral(probe, psi_g, quad);
    const double ent = -s.value / m.value - std::log(m.value);
    const double ent_err = s.error_estimate / m.value +
                           (std::abs(s.value) / (m.value * m.value) + 1.0 / m.value) *
                               m.error_estimate;

    const IntegralResult m1 = affine_surface_area(probe, 1.0, quad);
    const IntegralResult tv = total_variation(probe, quad);

    const double gap = 2.0 * (ent - ent_gaussian(n));
    const double santalo_term = std::log(m1.value) - n * std::log(2.0 * M_PI);
    const double tv_term = 0.5 * tv.value * tv.value;

    const double base_err = lhs.error_estimate + 2.0 * ent_err;
    std::vector<InequalityReport> out;

    InequalityReport refined = make_report(
        "entropy_chain_refined", lhs.value, gap + santalo_term - tv_term,
        base_err + rel(m1) + tv.value * tv.error_estimate);
    refined.terms["logdet_integral"] = lhs.value;
    refined.terms["entropy_gap"] = gap;
    refined.terms["santalo_term"] = santalo_term;
    refined.terms["total_variation"] = tv.value;
    out.push_back(std::move(refined));

    out.push_back(make_report("entropy_chain_santalo", lhs.value, gap + santalo_term,
                              base_err + rel(m1)));
    out.push_back(make_report("entropy_chain_plain", lhs.value, gap, base_err,
                              "needs centered probability density; centered internally"));
    return out;
}

std::vector<InequalityReport> check_kl_bounds(const ConvexFunctionSpec& spec,
                                              const QuadratureSpec& quad) {
    const IntegralResult m0 = mass(spec, quad);
    const IntegralResult m1 = affine_surface_area(spec, 1.0, quad);
    const IntegralResult kl = kl_divergence(spec, quad);
    const IntegralResult am1 = affine_surface_area_ext(spec, -1.0, quad);

    std::vector<InequalityReport> out;
    {
        const double lhs = std::log(m0.value / m1.value) * m0.value;
        const double err = kl.error_estimate +
                           (rel(m0) + rel(m1)) * m0.value +
                           std::abs(std::log(m0.value / m1.value)) * m0.error_estimate;
        InequalityReport r = make_report("kl_lower_jensen", lhs, kl.value, err);
        r.terms["as_0"] = m0.value;
        r.terms["as_1"] = m1.value;
        r.terms["kl"] = kl.value;
        out.push_back(std::move(r));
    }
    {
        const double err = kl.error_estimate + am1.error_estimate + m0.error_estimate;
        InequalityReport r = make_report("kl_upper_gradient", kl.value, am1.value - m0.value, err);
        r.terms["as_minus1"] = am1.value;
        r.terms["as_0"] = m0.value;
        out.push_back(std::move(r));
    }
    {
        const double err = kl.error_estimate + m0.error_estimate + m1.error_estimate;
        out.push_back(
            make_report("kl_lower_secant", m0.value - m1.value, kl.value, err,
                        "weaker tangent form of the Jensen bound"));
    }
    if (std::abs(m0.value - 1.0) <= 1e-8) {
        out.push_back(make_report("kl_probability_lower", 1.0 - std::log(m1.value),
                                  1.0 + kl.value, kl.error_estimate + rel(m1)));
        out.push_back(make_report("kl_probability_upper", 1.0 + kl.value, am1.value,
                                  kl.error_estimate + am1.error_estimate));
    }
    return out;
}

std::vector<InequalityReport> check_affine_chain(const ConvexFunctionSpec& spec, double lambda,
                                                 const QuadratureSpec& quad) {
    const IntegralResult m0 = mass(spec, quad);
    const IntegralResult m1 = affine_surface_area(spec, 1.0, quad);
    const IntegralResult al = affine_surface_area_ext(spec, lambda, quad);
    const IntegralResult alm = affine_surface_area_ext(spec, lambda - 1.0, quad);

    // t^lambda is convex outside (0,1), concave inside, linear at 0 and 1.
    const int sigma = (lambda > 0.0 && lambda < 1.0) ? -1 : +1;
    const bool linear = lambda == 0.0 || lambda == 1.0;

    std::vector<InequalityReport> out;
    {
        const double geo = std::exp(lambda * std::log(m1.value) +
                                    (1.0 - lambda) * std::log(m0.value));
        const double err = al.error_estimate +
                           geo * (std::abs(lambda) * rel(m1) + std::abs(1.0 - lambda) * rel(m0));
        InequalityReport r =
            oriented_report("affine_geometric_mean", geo, al.value, err, linear ? 0 : sigma,
                            linear ? "linear generator: equality" : "");
        r.terms["lambda"] = lambda;
        r.terms["as_lambda"] = al.value;
        r.terms["geometric_mean"] = geo;
        out.push_back(std::move(r));
    }
    {
        const double rhs = m0.value + xmul(lambda, al.value - alm.value);
        const double err = (1.0 + std::abs(lambda)) * al.error_estimate +
                           std::abs(lambda) * alm.error_estimate + m0.error_estimate;
        InequalityReport r =
            oriented_report("affine_gradient_bound", al.value, rhs, err, linear ? 0 : sigma);
        r.terms["lambda"] = lambda;
        r.terms["as_lambda_minus_1"] = alm.value;
        out.push_back(std::move(r));
    }
    {
        const double lhs = m0.value + lambda * (m1.value - m0.value);
        const double err = al.error_estimate + std::abs(lambda) * m1.error_estimate +
                           (1.0 + std::abs(lambda)) * m0.error_estimate;
        out.push_back(oriented_report("affine_secant_bound", lhs, al.value, err,
                                      linear ? 0 : sigma));
    }
    {
        const double d_ref = m1.value - m0.value;
        const double d_lam = al.value - alm.value;
        const double err = m0.error_estimate + m1.error_estimate + al.error_estimate +
                           alm.error_estimate;
        const int orient = lambda >= 1.0 ? +1 : -1;
        out.push_back(oriented_report("affine_difference_bound", d_ref, d_lam, err,
                                      lambda == 1.0 ? 0 : orient));
    }
    if (lambda == -1.0) {
        const IntegralResult am2 = affine_surface_area_ext(spec, -2.0, quad);
        const double rhs = 0.5 * (m0.value + am2.value);
        out.push_back(oriented_report("affine_midpoint_minus1", al.value, rhs,
                                      al.error_estimate + 0.5 * (m0.error_estimate +
                                                                 am2.error_estimate),
                                      +1));
        out.push_back(oriented_report("affine_midpoint_zero", m0.value,
                                      0.5 * (al.value + m1.value),
                                      m0.error_estimate + 0.5 * (al.error_estimate +
                                                                 m1.error_estimate),
                                      +1));
    }
    if (lambda == 0.5) {
        const IntegralResult amh = affine_surface_area_ext(spec, -0.5, quad);
        out.push_back(oriented_report("affine_midpoint_half", m0.value,
                                      0.5 * (al.value + amh.value),
                                      m0.error_estimate + 0.5 * (al.error_estimate +
                                                                 amh.error_estimate),
                                      +1));
        const double geo = std::sqrt(m1.value * m0.value);
        out.push_back(oriented_report("affine_geometric_half", al.value, geo,
                                      al.error_estimate +
                                          0.5 * geo * (rel(m0) + rel(m1)),
                                      +1));
    }
    return out;
}

std::vector<InequalityReport> check_santalo_family(const ConvexFunctionSpec& spec, double lambda,
                                                   const QuadratureSpec& quad) {
    const ConvexFunctionSpec centered = auto_centered(spec, quad);
    const int n = centered.dim;
    const IntegralResult m0 = mass(centered, quad);
    const IntegralResult al = affine_surface_area_ext(centered, lambda, quad);

    std::vector<InequalityReport> out;
    const double iso = std::exp(n * lambda * std::log(2.0 * M_PI) +
                                (1.0 - 2.0 * lambda) * std::log(m0.value));
    const double iso_err = iso * std::abs(1.0 - 2.0 * lambda) * rel(m0);
    if (lambda >= 0.0 && lambda <= 1.0) {
        InequalityReport r = make_report("santalo_upper", al.value, iso,
                                         al.error_estimate + iso_err,
                                         "centered internally");
        r.terms["lambda"] = lambda;
        r.terms["as_lambda"] = al.value;
        r.terms["isoperimetric_bound"] = iso;
        out.push_back(std::move(r));
    } else if (lambda < 0.0) {
        InequalityReport r = make_report("santalo_lower", iso, al.value,
                                         al.error_estimate + iso_err,
                                         "centered internally");
        r.terms["lambda"] = lambda;
        out.push_back(std::move(r));
    } else {
        out.push_back(skipped_report("santalo_lower",
                                     "lambda > 1 bound carries an unspecified universal "
                                     "constant; not evaluated"));
    }

    try {
        const ConvexFunctionSpec polar = polar_log_concave(centered);
        const IntegralResult ap = affine_surface_area_ext(polar, lambda, quad);
        const IntegralResult m1 = affine_surface_area(centered, 1.0, quad);

        const double prod = al.value * ap.value;
        const double prod_err =
            std::isfinite(prod) ? prod * (rel(al) + rel(ap)) : 0.0;
        if (lambda >= 0.0 && lambda <= 1.0) {
            out.push_back(make_report("santalo_product_upper", prod,
                                      std::pow(2.0 * M_PI, n), prod_err,
                                      "centered internally"));
        } else {
            const double floor_val = m0.value * m1.value;
            out.push_back(make_report("santalo_product_lower", floor_val, prod,
                                      prod_err + floor_val * (rel(m0) + rel(m1))));
        }

        const IntegralResult dual = affine_surface_area_ext(polar, 1.0 - lambda, quad);
        InequalityReport dup =
            make_report("duality_lambda", al.value, dual.value,
                        al.error_estimate + dual.error_estimate,
                        "identity: as_lambda(phi) = as_{1-lambda}(polar phi)");
        dup.terms["lambda"] = lambda;
        out.push_back(std::move(dup));
    } catch (const Error& e) {
        out.push_back(skipped_report("santalo_product", std::string("polar unavailable: ") +
                                                            e.what()));
    }
    return out;
}

std::vector<InequalityReport> check_sl_invariance(const ConvexFunctionSpec& spec, double lambda,
                                                  const Mat& s, const QuadratureSpec& quad) {
    if (std::abs(std::abs(det(s)) - 1.0) > 1e-9)
        throw ParameterError("check_sl_invariance: map must be volume-preserving");
    const ConvexFunctionSpec image = ConvexFunctionSpec::linear_image(spec, s);

    std::vector<InequalityReport> out;
    const IntegralResult a = affine_surface_area_ext(spec, lambda, quad);
    const IntegralResult b = affine_surface_area_ext(image, lambda, quad);
    InequalityReport r1 = make_report("sl_invariance_as", a.value, b.value,
                                      a.error_estimate + b.error_estimate,
                                      "identity under volume-preserving images");
    r1.terms["lambda"] = lambda;
    out.push_back(std::move(r1));

    const IntegralResult ka = kl_divergence(spec, quad);
    const IntegralResult kb = kl_divergence(image, quad);
    out.push_back(make_report("sl_invariance_kl", ka.value, kb.value,
                              ka.error_estimate + kb.error_estimate,
                              "identity under volume-preserving images"));
    return out;
}

} // namespace lcgeom
