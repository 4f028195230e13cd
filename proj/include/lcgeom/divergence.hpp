#pragma once

#include <map>
#include <string>
#include <vector>

#include "lcgeom/convex.hpp"
#include "lcgeom/generators.hpp"
#include "lcgeom/quadrature.hpp"

namespace lcgeom {

enum class Verdict { Pass, Equality, Fail, Skipped };

std::string to_string(Verdict v);

/// One verified inequality lhs <= rhs. slack = rhs - lhs, so the statement
/// holds numerically when slack >= -tolerance; |slack| <= eq_tolerance
/// upgrades the verdict to Equality. Infinities follow extended-real
/// comparison (an infinite rhs makes the claim vacuous, never false).
struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double tolerance = 0.0;
    double eq_tolerance = 0.0;
    Verdict verdict = Verdict::Skipped;
    std::map<std::string, double> terms;
    std::string note;
};

/// Builds the report from an error budget: tolerance = 3 err (+ tiny
/// magnitude-relative floor), eq_tolerance = max(1e-6, 10 err).
InequalityReport make_report(std::string name, double lhs, double rhs, double err,
                             std::string note = "");

InequalityReport skipped_report(std::string name, std::string note);

/// make_report with the sides ordered by generator convexity: convexity < 0
/// swaps them (every bound flips for concave generators). NaN on either
/// side, the inf - inf artifact, becomes Skipped rather than Fail.
InequalityReport oriented_report(std::string name, double small, double big, double err,
                                 int convexity, std::string note = "");

/// ln(p/q) at a point: 2 psi - <grad psi, x> + ln det hess psi. The two
/// mutually absolutely continuous densities carried by every log-concave
/// function are q = e^{-psi} and p = e^{psi - <grad psi, x>} det hess psi.
double log_density_ratio(const Vec& x, const DiffBundle& d);

/// True when the lambda-affine surface area integral converges. Kink
/// families contribute |x_i|^{(p-2) lambda} factors near the coordinate
/// hyperplanes, so the criterion there is (p-2) lambda > -1.
bool as_integrand_finite(const ConvexFunctionSpec& spec, double lambda);

/// as_lambda = int e^{(2 lambda - 1) psi - lambda <x, grad psi>}
/// (det hess psi)^lambda. as_0 = int e^{-psi}, as_1 = int e^{-psi*}.
/// Throws NumericalError when the integral diverges.
IntegralResult affine_surface_area(const ConvexFunctionSpec& spec, double lambda,
                                   const QuadratureSpec& quad);

/// Extended-real variant: divergent integrals come back as value = +inf
/// instead of a throw. Used by the inequality checks, which treat infinite
/// sides as vacuous.
IntegralResult affine_surface_area_ext(const ConvexFunctionSpec& spec, double lambda,
                                       const QuadratureSpec& quad);

/// D_f(P, Q) = int f(p/q) q = int e^{-psi} f(e^{2 psi - <grad psi, x>} det).
IntegralResult f_divergence(const ConvexFunctionSpec& spec, const DivergenceGenerator& gen,
                            const QuadratureSpec& quad);

/// Same with both densities normalized to probability densities:
/// int (q/as_0) f((p/as_1) / (q/as_0)).
IntegralResult normalized_f_divergence(const ConvexFunctionSpec& spec,
                                       const DivergenceGenerator& gen,
                                       const QuadratureSpec& quad);

/// D_KL(Q||P) = int q ln(q/p); set normalized for the probability version.
IntegralResult kl_divergence(const ConvexFunctionSpec& spec, const QuadratureSpec& quad,
                             bool normalized = false);

/// Total variation of the normalized densities, int |p/as_1 - q/as_0|.
IntegralResult total_variation(const ConvexFunctionSpec& spec, const QuadratureSpec& quad);

/// psi + ln(int e^{-psi}): same function rescaled to a probability density.
ConvexFunctionSpec normalized_spec(const ConvexFunctionSpec& spec, const QuadratureSpec& quad);

/// Translate so the barycenter of e^{-psi} sits at the origin.
ConvexFunctionSpec auto_centered(const ConvexFunctionSpec& spec, const QuadratureSpec& quad);

// ---- inequality checks ----

/// Jensen bound: D_f >= f(as_1/as_0) as_0 for convex f (reversed for
/// concave). Works for non-differentiable generators too.
InequalityReport check_divergence_bound(const ConvexFunctionSpec& spec,
                                        const DivergenceGenerator& gen,
                                        const QuadratureSpec& quad);

/// Two-sided bound for differentiable generators:
///   f(as_1/as_0) as_0 <= D_f <= f(1) as_0 + int f'(p/q)(p - q).
std::vector<InequalityReport> check_dragomir(const ConvexFunctionSpec& spec,
                                             const DivergenceGenerator& gen,
                                             const QuadratureSpec& quad);

/// Pointwise generator condition required by the sharpened Pinsker bound:
///   (f~(u) - f'(1)(u-1)) (1 - f'''(1)/(3 f''(1)) (u-1)) >= f''(1)/2 (u-1)^2
/// with f~ = f - f(1), scanned over a log-spaced grid of u.
InequalityReport check_gilardoni_condition(const DivergenceGenerator& gen, double u_max = 50.0);

/// Sharpened Pinsker bound for the normalized densities:
///   D^_f - f(1) >= f''(1)/2 (int |p^ - q^|)^2,
/// subject to the generator condition above (skipped when it fails).
InequalityReport check_pinsker(const ConvexFunctionSpec& spec, const DivergenceGenerator& gen,
                               const QuadratureSpec& quad);

/// Three nested entropy bounds on int ln(det hess psi) e^{-psi} for a
/// probability density (the spec is normalized and centered internally):
/// refined (with the total-variation correction), Santalo form, and plain.
std::vector<InequalityReport> check_entropy_chain(const ConvexFunctionSpec& spec,
                                                  const QuadratureSpec& quad);

/// Kullback-Leibler bounds from the two-sided divergence bound with
/// f = -ln t: ln(as_0/as_1) as_0 <= D_KL(Q||P) <= as_{-1} - as_0, plus the
/// weaker secant lower bound as_0 - as_1 <= D_KL.
std::vector<InequalityReport> check_kl_bounds(const ConvexFunctionSpec& spec,
                                              const QuadratureSpec& quad);

/// Affine-surface-area chain at one lambda, from the two-sided bound with
/// f = t^lambda: geometric-mean bound, gradient bound, secant bound,
/// difference monotonicity; midpoint specials at lambda = -1 and 1/2.
std::vector<InequalityReport> check_affine_chain(const ConvexFunctionSpec& spec, double lambda,
                                                 const QuadratureSpec& quad);

/// Upper/lower isoperimetric bounds against (2 pi)^{n lambda} as_0^{1-2
/// lambda} for the centered function, the dual-product bounds, and the
/// duality identity as_lambda(phi) = as_{1-lambda}(polar phi).
std::vector<InequalityReport> check_santalo_family(const ConvexFunctionSpec& spec, double lambda,
                                                   const QuadratureSpec& quad);

/// as_lambda and D_f are invariant under volume-preserving self-adjoint
/// linear images; verified as an equality report.
std::vector<InequalityReport> check_sl_invariance(const ConvexFunctionSpec& spec, double lambda,
                                                  const Mat& s, const QuadratureSpec& quad);

} // namespace lcgeom
