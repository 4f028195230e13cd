#include <algorithm>
#include <cmath>
#include <vector>

#include "lcgeom/convex.hpp"
#include "lcgeom/errors.hpp"

namespace lcgeom {

std::vector<double> conjugate_1d(const std::vector<double>& xs, const std::vector<double>& vs,
                                 const std::vector<double>& ys) {
    const size_t n = xs.size();
    if (n < 2 || vs.size() != n) throw GridError("conjugate_1d: need >= 2 samples");

    // Lower convex hull (Andrew scan); collinear middle points are dropped,
    // and the walk below only advances on strict improvement, so ties in the
    // supporting slope resolve toward the smaller abscissa.
    std::vector<size_t> hull;
    hull.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2) {
            const size_t o = hull[hull.size() - 2], a = hull.back();
            const double cross = (xs[a] - xs[o]) * (vs[i] - vs[o]) -
                                 (vs[a] - vs[o]) * (xs[i] - xs[o]);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(i);
    }

    std::vector<double> out(ys.size());
    size_t j = 0;
    for (size_t q = 0; q < ys.size(); ++q) {
        const double y = ys[q];
        if (q > 0 && ys[q] < ys[q - 1]) throw GridError("conjugate_1d: ys must ascend");
        while (j + 1 < hull.size() &&
               xs[hull[j + 1]] * y - vs[hull[j + 1]] > xs[hull[j]] * y - vs[hull[j]])
            ++j;
        const size_t i = hull[j];
        double best = xs[i] * y - vs[i];
        // Local parabola through the winning sample and its grid neighbours;
        // exact for quadratic data, O(h^3) for smooth convex data.
        if (i > 0 && i + 1 < n) {
            const double hl = xs[i] - xs[i - 1], hr = xs[i + 1] - xs[i];
            const double b = (vs[i + 1] - vs[i - 1]) / (hl + hr);
            const double aa = ((vs[i + 1] - vs[i]) / hr - (vs[i] - vs[i - 1]) / hl) / (hl + hr);
            if (aa > 1e-300) {
                double xhat = xs[i] + (y - b) / (2 * aa);
                xhat = std::clamp(xhat, xs[i - 1], xs[i + 1]);
                const double dxh = xhat - xs[i];
                best = std::max(best, xhat * y - (aa * dxh * dxh + b * dxh + vs[i]));
            }
        }
        out[q] = best;
    }
    return out;
}

namespace {

struct AxisRange {
    double smin, smax;
};

AxisRange slope_range(const GridFunction& g, int axis) {
    const size_t total = g.values.size();
    size_t stride = 1;
    for (int a = axis + 1; a < kMaxDim; ++a) stride *= size_t(g.points[size_t(a)]);
    const int pn = g.points[size_t(axis)];
    const double h = g.spacing(axis);
    double smin = std::numeric_limits<double>::infinity();
    double smax = -smin;
    const size_t block = stride * size_t(pn);
    for (size_t base = 0; base < total; base += block)
        for (size_t off = 0; off < stride; ++off)
            for (int i = 0; i + 1 < pn; ++i) {
                const double d =
                    (g.values[base + off + stride * size_t(i + 1)] -
                     g.values[base + off + stride * size_t(i)]) / h;
                smin = std::min(smin, d);
                smax = std::max(smax, d);
            }
    if (!(smax - smin > 1e-12 * std::max(1.0, std::abs(smax))))
        throw GridError("discrete_legendre: degenerate gradient range");
    return {smin, smax};
}

} // namespace

GridFunction discrete_legendre(const GridFunction& g) {
    AxisRange ranges[kMaxDim];
    for (int a = 0; a < g.dim; ++a) ranges[a] = slope_range(g, a);

    std::vector<double> work = g.values;
    const size_t total = work.size();

    // psi* = T_{d-1}(-T_{d-2}(... -T_0(psi)));  T_a conjugates along axis a.
    for (int a = 0; a < g.dim; ++a) {
        const int pn = g.points[size_t(a)];
        size_t stride = 1;
        for (int ax = a + 1; ax < kMaxDim; ++ax) stride *= size_t(g.points[size_t(ax)]);
        const size_t pcount = size_t(pn);
        std::vector<double> xs(pcount), ys(pcount), line(pcount);
        for (int i = 0; i < pn; ++i) {
            xs[size_t(i)] = g.coord(a, i);
            ys[size_t(i)] =
                ranges[a].smin + (ranges[a].smax - ranges[a].smin) * double(i) / double(pn - 1);
        }
        const size_t block = stride * size_t(pn);
        for (size_t base = 0; base < total; base += block)
            for (size_t off = 0; off < stride; ++off) {
                for (int i = 0; i < pn; ++i)
                    line[size_t(i)] = work[base + off + stride * size_t(i)];
                std::vector<double> conj = conjugate_1d(xs, line, ys);
                for (int i = 0; i < pn; ++i)
                    work[base + off + stride * size_t(i)] = conj[size_t(i)];
            }
        if (a + 1 < g.dim)
            for (double& v : work) v = -v;
    }

    GridFunction out;
    Vec lo(g.dim), hi(g.dim);
    std::array<int, kMaxDim> pts{1, 1, 1};
    for (int a = 0; a < g.dim; ++a) {
        lo[a] = ranges[a].smin;
        hi[a] = ranges[a].smax;
        pts[size_t(a)] = g.points[size_t(a)];
    }
    return GridFunction::create(g.dim, lo, hi, pts, std::move(work));
}

} // namespace lcgeom
