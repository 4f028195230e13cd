#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lcgeom/convex.hpp"
#include "lcgeom/smallvec.hpp"

namespace lcgeom {

enum class QuadMethod { TensorGauss, MonteCarlo, AdaptiveRefine };

struct QuadratureSpec {
    QuadMethod method = QuadMethod::TensorGauss;
    int nodes = 64;             // per-axis Gauss nodes on the main panel (>= 32)
    double half_width = 0.0;    // truncation radius; 0 = choose from the integrand decay
    long samples = 100000;      // MonteCarlo
    std::uint64_t seed = 20260825;
    double target_rel_tol = 1e-8; // AdaptiveRefine
    int max_doublings = 4;
    int jobs = 1;

    static QuadratureSpec gauss(int nodes_per_axis = 64, double half_width = 0.0) {
        QuadratureSpec q;
        q.nodes = nodes_per_axis;
        q.half_width = half_width;
        return q;
    }
    static QuadratureSpec monte_carlo(long samples, std::uint64_t seed) {
        QuadratureSpec q;
        q.method = QuadMethod::MonteCarlo;
        q.samples = samples;
        q.seed = seed;
        return q;
    }
    static QuadratureSpec adaptive(int base_nodes = 32, double target_rel_tol = 1e-8) {
        QuadratureSpec q;
        q.method = QuadMethod::AdaptiveRefine;
        q.nodes = base_nodes;
        q.target_rel_tol = target_rel_tol;
        return q;
    }
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double regular_fraction = 1.0; // share of quadrature weight on regular nodes
};

/// Integrand evaluated at quadrature nodes. When needs_derivatives is false
/// the DiffBundle argument carries only the value (gradient/Hessian not
/// computed), which roughly halves the cost of plain masses.
/// log_envelope, when set, overrides the decay profile used to pick the
/// truncation radius (default -psi); integrands that decay slower than
/// e^{-psi} must supply it.
struct Integrand {
    bool needs_derivatives = true;
    std::function<double(const Vec& x, const DiffBundle& d)> f;
    std::function<double(const Vec& x)> log_envelope;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights);

/// Truncation radius such that the exponent drops by `drop` in every scanned
/// direction (exponent(x) -> -inf). Returns +inf if some direction never
/// decays (divergent integrand).
double suggest_radius(int dim, const std::function<double(const Vec&)>& exponent,
                      double drop = 40.0, double cap = 5e5);

/// Integral of integrand.f over the decay-adapted box; non-regular nodes
/// contribute zero. Throws NumericalError if more than 1% of the quadrature
/// weight sits on non-regular nodes.
IntegralResult weighted_integral(const ConvexFunctionSpec& spec, const Integrand& integrand,
                                 const QuadratureSpec& quad);

/// \int e^{-psi}.
IntegralResult mass(const ConvexFunctionSpec& spec, const QuadratureSpec& quad);

/// Entropy of the normalized density phi/∫phi (equals the usual
/// Ent(phi) = ∫phi ln phi - ∫phi ln ∫phi when phi is a probability density).
double entropy(const ConvexFunctionSpec& spec, const QuadratureSpec& quad);

/// Entropy of the standard Gaussian density: -(n/2) ln(2 pi e).
double ent_gaussian(int dim);

/// Barycenter of e^{-psi}.
Vec barycenter(const ConvexFunctionSpec& spec, const QuadratureSpec& quad);

/// Deterministic low-discrepancy-ish sample points in the decay box of the
/// spec (uniform grid jittered by a seeded RNG); used by envelope checks.
std::vector<Vec> sample_points(const ConvexFunctionSpec& spec, int count, std::uint64_t seed);

} // namespace lcgeom
