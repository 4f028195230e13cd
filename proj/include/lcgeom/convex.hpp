#pragma once

#include <array>
#include <memory>
#include <vector>

#include "lcgeom/body_spec.hpp"
#include "lcgeom/smallvec.hpp"

namespace lcgeom {

/// Values of a convex function on a uniform rectangular grid. Outside the
/// box the function is +infinity. Evaluation uses per-axis cubic
/// (Catmull-Rom) interpolation, which reproduces quadratics exactly.
struct GridFunction {
    int dim = 1;
    Vec lower, upper;
    std::array<int, kMaxDim> points{1, 1, 1};
    std::vector<double> values; // row-major, axis 0 slowest

    /// Validates >= 16 points per axis, uniform spacing implied, and
    /// discrete convexity along each axis (second differences >= -1e-10
    /// relative); throws GridError otherwise.
    static GridFunction create(int dim, const Vec& lower, const Vec& upper,
                               const std::array<int, kMaxDim>& points,
                               std::vector<double> values);

    double spacing(int axis) const {
        return (upper[axis] - lower[axis]) / double(points[size_t(axis)] - 1);
    }
    double coord(int axis, int i) const { return lower[axis] + spacing(axis) * i; }
    size_t index(int i, int j = 0, int k = 0) const {
        return (size_t(i) * size_t(points[1]) + size_t(j)) * size_t(points[2]) + size_t(k);
    }
    bool inside(const Vec& x, double pad = 1e-12) const;

    /// Interpolated value; +infinity outside the box.
    double value_at(const Vec& x) const;
};

enum class Family {
    Quadratic,   // psi = <Ax,x>/2 + <b,x> + c
    PowerSum,    // psi = scale * sum |x_i|^p + offset, p > 1, scale > 0
    GaugeSquare, // psi = ||x||_K^2 / 2
    Tabulated,   // grid values
    AffineImage, // psi = base(Sx + t) + <w,x> + c0; in-memory only
};

/// Description of a convex function psi defining phi = e^{-psi}.
/// Construct through the factory functions, which validate parameters.
struct ConvexFunctionSpec {
    Family family = Family::Quadratic;
    int dim = 1;

    Mat a;
    Vec b;
    double c = 0.0;

    double p = 2.0, scale = 0.5, offset = 0.0;

    std::shared_ptr<const BodySpec> body;
    std::shared_ptr<const GridFunction> grid;

    std::shared_ptr<const ConvexFunctionSpec> image_base;
    Mat s;
    Vec t, w;
    double c0 = 0.0;

    static ConvexFunctionSpec quadratic(const Mat& a, const Vec& b, double c = 0.0);
    static ConvexFunctionSpec quadratic(const Mat& a) { return quadratic(a, Vec::zero(a.n)); }
    static ConvexFunctionSpec standard_gaussian(int dim) {
        return quadratic(Mat::identity(dim), Vec::zero(dim));
    }
    static ConvexFunctionSpec power_sum(int dim, double p, double scale, double offset = 0.0);
    static ConvexFunctionSpec gauge_square(const BodySpec& body);
    static ConvexFunctionSpec tabulated(GridFunction grid);
    static ConvexFunctionSpec affine_image(const ConvexFunctionSpec& base, const Mat& s,
                                           const Vec& t, const Vec& w, double c0);
    /// psi(x + shift), as an in-family rewrite when possible.
    static ConvexFunctionSpec translated(const ConvexFunctionSpec& base, const Vec& shift);
    /// psi(Sx) for unimodular S (used by invariance tests).
    static ConvexFunctionSpec linear_image(const ConvexFunctionSpec& base, const Mat& s);
};

/// Value, gradient and Hessian of psi at a point. `regular` is false where
/// derivatives are unreliable: kinks of PowerSum with p < 2 (any |x_i| <
/// 1e-8), Hessians failing |det| >= 1e-12 (trace/n)^n, non-SPD Hessians,
/// or stencils leaving a tabulated grid.
struct DiffBundle {
    double value = 0.0;
    Vec gradient;
    Mat hessian;
    double hessian_det = 0.0;
    double hessian_logdet = 0.0; // valid only when regular
    bool regular = false;
};

double evaluate(const ConvexFunctionSpec& spec, const Vec& x);
DiffBundle differentials(const ConvexFunctionSpec& spec, const Vec& x);

/// Legendre transform psi*(y) = sup_x <x,y> - psi(x). Analytic for
/// Quadratic/PowerSum/GaugeSquare/AffineImage; discrete transform for
/// Tabulated (dual grid spans the sampled gradient range).
ConvexFunctionSpec legendre(const ConvexFunctionSpec& spec);

/// Polar of the log-concave function phi = e^{-psi} is e^{-psi*}; at the
/// spec level this is the Legendre transform.
ConvexFunctionSpec polar_log_concave(const ConvexFunctionSpec& spec);

/// Max |psi*(grad psi(x)) - (<x, grad psi(x)> - psi(x))| over the sample
/// points (non-regular points are skipped).
double envelope_check(const ConvexFunctionSpec& spec, const std::vector<Vec>& points);

/// Samples an analytic spec onto a uniform grid.
GridFunction tabulate(const ConvexFunctionSpec& spec, const Vec& lower, const Vec& upper,
                      const std::array<int, kMaxDim>& points);

// Discrete Legendre transform building blocks (also used by the
// Monge-Ampere solver).
//
// conjugate_1d computes sup_i (x_i y - v_i) refined by a local parabola fit
// through the winning sample and its neighbours; exact for quadratic data.
// xs must be strictly increasing, ys ascending. Ties in the discrete argmax
// break toward the smaller abscissa.
std::vector<double> conjugate_1d(const std::vector<double>& xs, const std::vector<double>& vs,
                                 const std::vector<double>& ys);
GridFunction discrete_legendre(const GridFunction& g);

} // namespace lcgeom
