#include <algorithm>
#include <cmath>
#include <limits>

#include "lcgeom/bodies.hpp"
#include "lcgeom/convex.hpp"
#include "lcgeom/errors.hpp"

namespace lcgeom {

std::vector<InequalityReport> check_body_dragomir(const BodySpec& body,
                                                  const DivergenceGenerator& gen, int m) {
    if (!gen.differentiable)
        return {skipped_report("body_dragomir_lower_" + gen.name,
                               "generator not differentiable"),
                skipped_report("body_dragomir_upper_" + gen.name,
                               "generator not differentiable")};
    const int n = body.dim;
    const double vol = body_volume(body, m);
    const double pvol = body_polar_volume(body, m);

    // For power generators t^lam route through as_p, which knows the exact
    // divergence predicate at p-ball kinks; lam = p/(n+p) inverts to
    // p = n lam / (1 - lam).
    IntegralResult div;
    if (gen.shape == GenShape::Power && gen.lam != 1.0)
        div = body_affine_surface_area(body, double(n) * gen.lam / (1.0 - gen.lam), m);
    else
        div = body_f_divergence(body, gen, m);

    std::vector<InequalityReport> out;
    {
        const double jensen = double(n) * vol * gen.eval(pvol / vol);
        InequalityReport r =
            oriented_report("body_dragomir_lower_" + gen.name, jensen, div.value,
                            div.error_estimate + 1e-9 * std::abs(jensen), gen.convexity,
                            gen.convexity == 0 ? "linear generator: equality" : "");
        r.terms["volume"] = vol;
        r.terms["polar_volume"] = pvol;
        r.terms["f_divergence"] = div.value;
        out.push_back(std::move(r));
    }
    {
        const IntegralResult corr = boundary_integral(body, m, [&](const BoundaryPoint& b) {
            const double lr = std::log(b.curvature) - (n + 1) * std::log(b.support);
            return gen.deriv_log(lr) * std::expm1(lr) * b.support;
        });
        const double rhs = double(n) * gen.f1 * vol + corr.value;
        InequalityReport r = oriented_report("body_dragomir_upper_" + gen.name, div.value, rhs,
                                             div.error_estimate + corr.error_estimate,
                                             gen.convexity);
        r.terms["gradient_correction"] = corr.value;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<InequalityReport> check_body_kl_bounds(const BodySpec& body, int m) {
    const int n = body.dim;
    const double vol = body_volume(body, m);
    const double pvol = body_polar_volume(body, m);
    // D_KL(Q||P) = int q ln(q/p) with the roles of the bodies' densities
    // fixed by q = <x,N>, p = kappa/<x,N>^n.
    const IntegralResult kl = boundary_integral(body, m, [&](const BoundaryPoint& b) {
        const double lr = std::log(b.curvature) - (n + 1) * std::log(b.support);
        return -lr * b.support;
    });
    const IntegralResult comp = body_affine_surface_area(body, -0.5 * n, m);

    std::vector<InequalityReport> out;
    {
        InequalityReport r = make_report("body_kl_lower", double(n) * vol * std::log(vol / pvol),
                                         kl.value, kl.error_estimate + 1e-9 * kl.value);
        r.terms["volume"] = vol;
        r.terms["polar_volume"] = pvol;
        out.push_back(std::move(r));
    }
    {
        InequalityReport r = make_report("body_kl_upper", kl.value,
                                         comp.value - double(n) * vol,
                                         kl.error_estimate + comp.error_estimate,
                                         "upper bound as_{-n/2} - as_0");
        r.terms["as_minus_half_n"] = comp.value;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<InequalityReport> check_body_affine_family(const BodySpec& body, double p, int m) {
    const int n = body.dim;
    if (p == -double(n)) return {skipped_report("body_affine_family", "p = -n excluded")};
    const double vol = body_volume(body, m);
    const double pvol = body_polar_volume(body, m);
    const double as0 = double(n) * vol, asi = double(n) * pvol;
    const IntegralResult ap = body_affine_surface_area(body, p, m);
    const double pprime = -double(n) * n / (2.0 * n + p);
    const IntegralResult app =
        pprime == -double(n) ? IntegralResult{std::numeric_limits<double>::quiet_NaN(), 0, 1}
                             : body_affine_surface_area(body, pprime, m);
    const double lam = std::isinf(p) ? 1.0 : p / (n + p);
    const int sigma = (lam > 0.0 && lam < 1.0) ? -1 : +1; // t^lam concave on (0,1)
    const bool linear = lam == 0.0 || lam == 1.0;

    std::vector<InequalityReport> out;
    {
        const double geo = double(n) * std::pow(pvol, lam) * std::pow(vol, 1.0 - lam);
        InequalityReport r = oriented_report("body_affine_geometric", geo, ap.value,
                                             ap.error_estimate + 1e-9 * geo,
                                             linear ? 0 : sigma);
        r.terms["p"] = p;
        r.terms["as_p"] = ap.value;
        out.push_back(std::move(r));
    }
    if (!std::isnan(app.value)) {
        const double rhs = lam == 0.0 ? as0 : as0 + lam * (ap.value - app.value);
        InequalityReport r = oriented_report(
            "body_affine_gradient", ap.value, rhs,
            (1.0 + std::abs(lam)) * ap.error_estimate + std::abs(lam) * app.error_estimate,
            linear ? 0 : sigma);
        r.terms["companion_index"] = pprime;
        out.push_back(std::move(r));
    } else {
        out.push_back(skipped_report("body_affine_gradient", "companion index hits -n"));
    }
    {
        const BodySpec polar = polar_body(body);
        const IntegralResult dual_p = body_affine_surface_area(polar, p, m);
        const double prod = ap.value * dual_p.value;
        const double ref = double(n) * n * vol * pvol;
        const double err = std::isfinite(prod)
                               ? ap.error_estimate * std::abs(dual_p.value) +
                                     dual_p.error_estimate * std::abs(ap.value)
                               : 0.0;
        if (p >= 0.0 || std::isinf(p))
            out.push_back(make_report("body_product_upper", prod, ref, err + 1e-9 * ref));
        else
            out.push_back(make_report("body_product_lower", ref, prod, err + 1e-9 * ref));

        if (p != 0.0 && !std::isinf(p)) {
            const IntegralResult dual = body_affine_surface_area(polar, double(n) * n / p, m);
            out.push_back(make_report("body_duality", ap.value, dual.value,
                                      ap.error_estimate + dual.error_estimate,
                                      "identity as_p(K) = as_{n^2/p}(polar K)"));
        }
    }
    if (!std::isinf(p)) {
        // Mixing bound against the endpoints as_0 = n|K|, as_inf = n|K°|;
        // reversed for p < 0.
        const double mix = lam * asi + (1.0 - lam) * as0;
        const int orient = p > 0 ? +1 : (p < 0 ? -1 : 0); // as_p <= mix for p > 0, reversed p < 0
        out.push_back(oriented_report("body_mixing_bound", ap.value, mix,
                                      ap.error_estimate + 1e-9 * std::abs(mix), orient));
        if (!std::isnan(app.value)) {
            // as_inf - as_0 <= as_p - as_p' for p < -n, reversed otherwise.
            const int orient2 = p < -double(n) ? +1 : -1;
            const double d_p = ap.value - app.value;
            out.push_back(oriented_report("body_difference_bound", asi - as0, d_p,
                                          ap.error_estimate + app.error_estimate, orient2));
        }
    }
    if (p == double(n)) {
        const double ref = as0 * asi;
        out.push_back(make_report("body_self_dual_point", ap.value * ap.value, ref,
                                  2 * std::abs(ap.value) * ap.error_estimate + 1e-9 * ref,
                                  "(as_n)^2 <= as_0 as_inf"));
    }
    return out;
}

InequalityReport check_body_pinsker(const BodySpec& body, const DivergenceGenerator& gen,
                                    int m) {
    const std::string name = "body_pinsker_" + gen.name;
    const InequalityReport cond = check_gilardoni_condition(gen);
    if (cond.verdict == Verdict::Skipped) return skipped_report(name, cond.note);
    if (cond.verdict == Verdict::Fail)
        return skipped_report(name, "generator condition fails near u = " +
                                        std::to_string(cond.terms.at("argmin_u")));

    const int n = body.dim;
    const double vol = body_volume(body, m);
    const double pvol = body_polar_volume(body, m);
    // Normalized densities p/(n|K°|) and q/(n|K|) shift the log ratio.
    const double shift = std::log(vol) - std::log(pvol);

    const IntegralResult div = boundary_integral(body, m, [&](const BoundaryPoint& b) {
        const double lr = std::log(b.curvature) - (n + 1) * std::log(b.support) + shift;
        return gen.eval_log(lr) * b.support / (double(n) * vol);
    });
    const IntegralResult tv = boundary_integral(body, m, [&](const BoundaryPoint& b) {
        const double pk = b.curvature / std::pow(b.support, n);
        return std::abs(pk / (double(n) * pvol) - b.support / (double(n) * vol));
    });
    const double lhs = 0.5 * gen.fpp1 * tv.value * tv.value;
    const double rhs = div.value - gen.f1;
    InequalityReport r =
        make_report(name, lhs, rhs,
                    div.error_estimate + gen.fpp1 * tv.value * tv.error_estimate);
    r.terms["normalized_divergence"] = div.value;
    r.terms["total_variation"] = tv.value;
    return r;
}

std::vector<InequalityReport> check_body_bridge(const BodySpec& body, double p,
                                                const QuadratureSpec& quad, int m) {
    const int n = body.dim;
    if (p == -double(n)) return {skipped_report("body_bridge", "p = -n excluded")};
    const ConvexFunctionSpec phi = ConvexFunctionSpec::gauge_square(body);
    const double ball = unit_ball_volume(n);

    std::vector<InequalityReport> out;
    {
        const IntegralResult mphi = mass(phi, quad);
        const double vol = body_volume(body, m);
        const double ref = std::pow(2.0 * M_PI, 0.5 * n) * vol / ball;
        InequalityReport r = make_report("bridge_mass", mphi.value, ref,
                                         mphi.error_estimate + 1e-9 * ref,
                                         "identity int e^{-gauge^2/2} = (2 pi)^{n/2} |K|/|B|");
        r.terms["volume"] = vol;
        out.push_back(std::move(r));
    }
    {
        const double lam = std::isinf(p) ? 1.0 : p / (n + p);
        const IntegralResult lhs = affine_surface_area_ext(phi, lam, quad);
        const IntegralResult rhs = body_affine_surface_area(body, p, m);
        const double factor = std::pow(2.0 * M_PI, 0.5 * n) / (double(n) * ball);
        InequalityReport r = make_report(
            "bridge_as", lhs.value, factor * rhs.value,
            lhs.error_estimate + factor * rhs.error_estimate + 1e-9 * std::abs(lhs.value),
            "identity as_lambda(e^{-gauge^2/2}) = (2 pi)^{n/2}/(n|B|) as_p, lambda = p/(n+p)");
        r.terms["p"] = p;
        r.terms["lambda"] = lam;
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace lcgeom
