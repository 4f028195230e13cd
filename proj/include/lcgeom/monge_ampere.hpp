#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lcgeom/convex.hpp"
#include "lcgeom/quadrature.hpp"

namespace lcgeom {

/// Pointwise residual of det hess psi = C e^{-2 psi + <grad psi, x>} with
/// C = int e^{-psi*} / int e^{-psi}. Every centered Gaussian solves this
/// exactly; the equality flag mirrors equality in the divergence bound.
struct MAResidualField {
    std::vector<Vec> points;
    std::vector<double> residual;
    double c_constant = 0.0;
    double sup_norm = 0.0;
    double l1_norm = 0.0; // weighted by e^{-psi}
    double mass = 0.0;    // int e^{-psi}, the scale for the equality flag
    bool equality = false; // l1_norm <= 1e-5 * mass
};

MAResidualField ma_residual(const ConvexFunctionSpec& spec, const QuadratureSpec& quad,
                            int sample_count = 2048);

/// Pushforward test for T = grad psi: samples X ~ e^{-psi}/Z, compares
/// T(X) against e^{-psi*}/Z*. 1D uses inverse-CDF sampling and a
/// Kolmogorov-Smirnov statistic; 2D uses rejection sampling under a
/// Gaussian envelope, sliced KS over 8 directions and moment mismatches.
struct TransportCheck {
    int sample_count = 0;
    std::vector<Vec> pushed;
    double ks = 0.0;        // 1D statistic, or the worst slice in 2D
    double threshold = 0.0; // 1.63 / sqrt(N), about the 1% level
    std::map<std::string, double> moment_mismatch;
    double acceptance = 1.0; // rejection acceptance rate (1.0 in 1D)
    bool pass = false;
};

TransportCheck pushforward_check(const ConvexFunctionSpec& spec, int sample_count,
                                 std::uint64_t seed);

struct SolverTraceRow {
    int iter = 0;
    double residual_sup = 0.0; // of the defining equation, may be inf early
    double residual_l1 = 0.0;
    double c_constant = 0.0;
};

struct MASolution {
    GridFunction psi;
    std::vector<SolverTraceRow> trace;
    bool converged = false;
    double c_constant = 0.0;
    double fitted_a = 0.0;      // least-squares coefficient of x^2/2 (or r^2/2)
    double fit_residual = 0.0;  // sup deviation from the fitted quadratic, centered
    double odd_part = 0.0;      // sup |odd component| of the output
};

/// Damped Newton on the log form ln psi'' + 2 psi - x psi' = ln C[psi],
/// C recomputed from the current iterate each sweep (dual mass through the
/// pushforward identity int e^{psi - x psi'} psi''). Gauge per sweep:
/// evenness, psi(0) = 0, and an additive multiple of x^2/2 fixing
/// int e^{-psi} = sqrt(2 pi), which pins the unique representative x^2/2
/// among the quadratic solution family. Initial must be convex on a
/// symmetric grid. Converged when the sup of the defining residual is
/// <= 1e-8. Throws DivergenceError after 20 consecutive residual increases.
MASolution solve_ma_1d(const GridFunction& initial, int max_iter = 200, double damping = 0.5);

/// Radially symmetric 2D variant for psi(x) = u(|x|):
/// u'' u'/r = C e^{-2u + r u'} on [0, R] with u'(0) = 0; mass gauge
/// int e^{-u} 2 pi r dr = 2 pi. Input holds u on a [0, R] grid.
MASolution solve_ma_radial(const GridFunction& initial, int max_iter = 200,
                           double damping = 0.5);

/// Standard battery of convex initials on a symmetric (or radial) grid:
/// quadratics at three scales, two cosine-bump perturbations, a quartic,
/// |x|^3/3 and cosh - 1.
std::vector<GridFunction> default_ma_initials(int n_points = 801, double radius = 8.0,
                                              bool radial = false);

struct UniquenessReport {
    std::vector<MASolution> line_runs;
    std::vector<MASolution> radial_runs;
    double max_pairwise = 0.0;        // centered sup difference between 1D outputs
    double max_pairwise_radial = 0.0;
    double max_odd_part = 0.0;
    bool agree = false; // all converged and pairwise <= 1e-4
    std::string note;
};

UniquenessReport uniqueness_probe(const std::vector<GridFunction>& initials,
                                  const std::vector<GridFunction>& radial_initials,
                                  int max_iter = 200, double damping = 0.5);

} // namespace lcgeom
