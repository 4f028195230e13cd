#include <algorithm>
#include <cmath>
#include <limits>

#include "lcgeom/convex.hpp"
#include "lcgeom/errors.hpp"

namespace lcgeom {

namespace {

constexpr double kConvexityTol = 1e-10;

// Cubic Lagrange weights on a 4-point stencil at local coordinate u in
// [0,3]. For interior cells (u in [1,2]) this is Catmull-Rom; near edges the
// stencil shifts inward, keeping full cubic reproduction. Quadratic data
// therefore interpolates exactly everywhere.
void lagrange4(double u, double w[4]) {
    w[0] = -(u - 1) * (u - 2) * (u - 3) / 6.0;
    w[1] = u * (u - 2) * (u - 3) / 2.0;
    w[2] = -u * (u - 1) * (u - 3) / 2.0;
    w[3] = u * (u - 1) * (u - 2) / 6.0;
}

} // namespace

GridFunction GridFunction::create(int dim, const Vec& lower, const Vec& upper,
                                  const std::array<int, kMaxDim>& points,
                                  std::vector<double> values) {
    if (dim < 1 || dim > kMaxDim) throw GridError("grid: dimension must be 1..3");
    GridFunction g;
    g.dim = dim;
    g.lower = lower;
    g.upper = upper;
    g.points = {1, 1, 1};
    size_t total = 1;
    for (int a = 0; a < dim; ++a) {
        if (points[size_t(a)] < 16) throw GridError("grid: need at least 16 points per axis");
        if (!(upper[a] > lower[a])) throw GridError("grid: empty box");
        g.points[size_t(a)] = points[size_t(a)];
        total *= size_t(points[size_t(a)]);
    }
    if (values.size() != total) throw GridError("grid: value count does not match grid size");
    double scale = 1.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw GridError("grid: non-finite value");
        scale = std::max(scale, std::abs(v));
    }
    g.values = std::move(values);

    // Discrete convexity along each axis line.
    const int pi = g.points[0], pj = g.points[1], pk = g.points[2];
    auto at = [&](int i, int j, int k) { return g.values[g.index(i, j, k)]; };
    for (int j = 0; j < pj; ++j)
        for (int k = 0; k < pk; ++k)
            for (int i = 1; i + 1 < pi; ++i)
                if (at(i - 1, j, k) - 2 * at(i, j, k) + at(i + 1, j, k) < -kConvexityTol * scale)
                    throw GridError("grid: values not convex along axis 0");
    if (dim >= 2)
        for (int i = 0; i < pi; ++i)
            for (int k = 0; k < pk; ++k)
                for (int j = 1; j + 1 < pj; ++j)
                    if (at(i, j - 1, k) - 2 * at(i, j, k) + at(i, j + 1, k) <
                        -kConvexityTol * scale)
                        throw GridError("grid: values not convex along axis 1");
    if (dim >= 3)
        for (int i = 0; i < pi; ++i)
            for (int j = 0; j < pj; ++j)
                for (int k = 1; k + 1 < pk; ++k)
                    if (at(i, j, k - 1) - 2 * at(i, j, k) + at(i, j, k + 1) <
                        -kConvexityTol * scale)
                        throw GridError("grid: values not convex along axis 2");
    return g;
}

bool GridFunction::inside(const Vec& x, double pad) const {
    for (int a = 0; a < dim; ++a) {
        const double span = upper[a] - lower[a];
        if (x[a] < lower[a] - pad * span || x[a] > upper[a] + pad * span) return false;
    }
    return true;
}

double GridFunction::value_at(const Vec& x) const {
    if (!inside(x)) return std::numeric_limits<double>::infinity();

    int start[kMaxDim] = {0, 0, 0};
    double w[kMaxDim][4];
    for (int a = 0; a < dim; ++a) {
        const double h = spacing(a);
        double t = std::clamp((x[a] - lower[a]) / h, 0.0, double(points[size_t(a)] - 1));
        const int cell = std::min(int(t), points[size_t(a)] - 2);
        start[a] = std::clamp(cell - 1, 0, points[size_t(a)] - 4);
        lagrange4(t - start[a], w[a]);
    }
    for (int a = dim; a < kMaxDim; ++a) {
        start[a] = 0;
        w[a][0] = 1.0;
        w[a][1] = w[a][2] = w[a][3] = 0.0;
    }

    double acc = 0.0;
    for (int di = 0; di < 4; ++di) {
        if (w[0][di] == 0.0) continue;
        for (int dj = 0; dj < 4; ++dj) {
            if (w[1][dj] == 0.0) continue;
            for (int dk = 0; dk < 4; ++dk) {
                if (w[2][dk] == 0.0) continue;
                acc += w[0][di] * w[1][dj] * w[2][dk] *
                       values[index(start[0] + di, dim > 1 ? start[1] + dj : 0,
                                    dim > 2 ? start[2] + dk : 0)];
            }
        }
    }
    return acc;
}

} // namespace lcgeom
