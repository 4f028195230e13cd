#pragma once

#include <functional>
#include <vector>

#include "lcgeom/body_spec.hpp"
#include "lcgeom/divergence.hpp"
#include "lcgeom/generators.hpp"
#include "lcgeom/smallvec.hpp"

namespace lcgeom {

/// One boundary quadrature node. weight carries the surface measure, so
/// sums of f(point) * weight approximate boundary integrals against mu.
struct BoundaryPoint {
    Vec x;
    Vec normal;       // outer unit normal
    double weight;    // surface measure of the patch
    double support;   // <x, N>
    double curvature; // Gauss curvature at x
};

/// Boundary sampling with m azimuthal nodes. n = 2 uses a midpoint angle
/// grid (spectral accuracy for smooth bodies, and it avoids the axis kinks
/// of p-balls); n = 3 tensors Gauss nodes in cos(polar) with a midpoint
/// azimuth grid. Curvature comes from the exact Hessian identity
/// det hess(gauge^2/2) = curvature / <x,N>^{n+1}, not from surface fits.
std::vector<BoundaryPoint> boundary_sample(const BodySpec& body, int m);

/// int f dmu over the boundary sample at m nodes; the m/2 difference is the
/// error estimate. m <= 0 picks the family default.
IntegralResult boundary_integral(const BodySpec& body, int m,
                                 const std::function<double(const BoundaryPoint&)>& f);

/// |K| = (1/n) int <x,N> dmu over the boundary sample.
double body_volume(const BodySpec& body, int m = 0);

/// |K°| = (1/n) int curvature / <x,N>^n dmu.
double body_polar_volume(const BodySpec& body, int m = 0);

/// Volume of the Euclidean unit ball.
double unit_ball_volume(int dim);

/// L_p affine surface area
///   as_p(K) = int curvature^{p/(n+p)} <x,N>^{n(1-p)/(n+p)} dmu,
/// extended-real: +inf when the curvature-power integral diverges at the
/// flat points of a p-ball. Throws ParameterError at p = -n.
IntegralResult body_affine_surface_area(const BodySpec& body, double p, int m = 0);

/// D_f(P_K, Q_K) = int f(curvature / <x,N>^{n+1}) <x,N> dmu where the cone
/// densities are p_K = curvature / <x,N>^n and q_K = <x,N>.
IntegralResult body_f_divergence(const BodySpec& body, const DivergenceGenerator& gen,
                                 int m = 0);

/// Two-sided divergence bound on the body densities:
///   n|K| f(|K°|/|K|) <= D_f(P_K,Q_K) <= n f(1)|K| + int f'(p/q)(p - q).
std::vector<InequalityReport> check_body_dragomir(const BodySpec& body,
                                                  const DivergenceGenerator& gen, int m = 0);

/// Kullback-Leibler bounds for the cone densities:
///   n|K| ln(|K|/|K°|) <= D_KL(Q_K||P_K) <= as_{-n/2}(K) - as_0(K).
std::vector<InequalityReport> check_body_kl_bounds(const BodySpec& body, int m = 0);

/// The L_p affine isoperimetric family at one p: geometric-mean bound,
/// gradient bound with the companion index -n^2/(2n+p), dual products
/// against n^2 |K||K°|, the duality identity as_p(K) = as_{n^2/p}(K°),
/// mixing bounds with as_0 = n|K| and as_inf = n|K°|, and the
/// (as_n)^2 <= as_0 as_inf special case.
std::vector<InequalityReport> check_body_affine_family(const BodySpec& body, double p,
                                                       int m = 0);

/// Pinsker bound for the normalized cone densities p/(n|K°|), q/(n|K|):
///   D^_f - f(1) >= f''(1)/2 (int |p^ - q^| dmu)^2.
InequalityReport check_body_pinsker(const BodySpec& body, const DivergenceGenerator& gen,
                                    int m = 0);

/// Consistency between the body and log-concave viewpoints under
/// phi_K = e^{-gauge_K^2/2}: mass identity int phi_K = (2 pi)^{n/2} |K| /
/// |B^n_2| and the functional bridge
///   as_lambda(phi_K) = (2 pi)^{n/2} / (n |B^n_2|) as_p(K),  lambda = p/(n+p).
std::vector<InequalityReport> check_body_bridge(const BodySpec& body, double p,
                                                const QuadratureSpec& quad, int m = 0);

} // namespace lcgeom
