#include "lcgeom/convex.hpp"

#include <cmath>
#include <limits>

#include "lcgeom/errors.hpp"

namespace lcgeom {

namespace {

constexpr double kKinkRadius = 1e-8;   // PowerSum p<2 singular-hyperplane band
constexpr double kDetFloor = 1e-12;    // relative Hessian-determinant floor
const double kFdStep = std::cbrt(std::numeric_limits<double>::epsilon());

void require(bool ok, const char* msg) {
    if (!ok) throw ParameterError(msg);
}

double powabs(double x, double e) { return std::pow(std::abs(x), e); }

/// Central finite differences of a callable, step h_i = cbrt(eps)*max(1,|x_i|).
template <typename F>
void fd_derivatives(const F& f, const Vec& x, Vec& grad, Mat& hess) {
    const int n = x.n;
    grad = Vec(n);
    hess = Mat(n);
    Vec h(n);
    for (int i = 0; i < n; ++i) h[i] = kFdStep * std::max(1.0, std::abs(x[i]));
    const double f0 = f(x);
    std::array<double, kMaxDim> fp{}, fm{};
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h[i];
        xm[i] -= h[i];
        fp[size_t(i)] = f(xp);
        fm[size_t(i)] = f(xm);
        grad[i] = (fp[size_t(i)] - fm[size_t(i)]) / (2 * h[i]);
        hess(i, i) = (fp[size_t(i)] - 2 * f0 + fm[size_t(i)]) / (h[i] * h[i]);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Vec xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[i] += h[i]; xpp[j] += h[j];
            xpm[i] += h[i]; xpm[j] -= h[j];
            xmp[i] -= h[i]; xmp[j] += h[j];
            xmm[i] -= h[i]; xmm[j] -= h[j];
            hess(i, j) = hess(j, i) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4 * h[i] * h[j]);
        }
}

/// Shared tail: determinant, log-determinant, regularity flags.
void finish_bundle(DiffBundle& d, bool family_regular) {
    const int n = d.hessian.n;
    bool ok = family_regular && std::isfinite(d.value);
    for (int i = 0; ok && i < n; ++i) {
        if (!std::isfinite(d.gradient[i])) ok = false;
        for (int j = 0; ok && j < n; ++j)
            if (!std::isfinite(d.hessian(i, j))) ok = false;
    }
    d.hessian_det = ok ? det(d.hessian) : std::numeric_limits<double>::quiet_NaN();
    if (ok) {
        const double tr = trace(d.hessian);
        if (!(tr > 0.0)) ok = false;
        else if (std::abs(d.hessian_det) < kDetFloor * std::pow(tr / n, double(n))) ok = false;
    }
    if (ok) ok = cholesky_logdet(d.hessian, d.hessian_logdet);
    d.regular = ok;
}

} // namespace

ConvexFunctionSpec ConvexFunctionSpec::quadratic(const Mat& a, const Vec& b, double c) {
    require(a.n >= 1 && a.n <= kMaxDim, "quadratic: dimension must be 1..3");
    require(a.n == b.n, "quadratic: size mismatch between A and b");
    require(is_spd(a), "quadratic: A must be symmetric positive definite");
    ConvexFunctionSpec s;
    s.family = Family::Quadratic;
    s.dim = a.n;
    s.a = a;
    s.b = b;
    s.c = c;
    return s;
}

ConvexFunctionSpec ConvexFunctionSpec::power_sum(int dim, double p, double scale, double offset) {
    require(dim >= 1 && dim <= kMaxDim, "power_sum: dimension must be 1..3");
    require(p > 1.0, "power_sum: exponent must exceed 1");
    require(scale > 0.0, "power_sum: scale must be positive");
    ConvexFunctionSpec s;
    s.family = Family::PowerSum;
    s.dim = dim;
    s.p = p;
    s.scale = scale;
    s.offset = offset;
    return s;
}

ConvexFunctionSpec ConvexFunctionSpec::gauge_square(const BodySpec& body) {
    ConvexFunctionSpec s;
    s.family = Family::GaugeSquare;
    s.dim = body.dim;
    s.body = std::make_shared<BodySpec>(body);
    return s;
}

ConvexFunctionSpec ConvexFunctionSpec::tabulated(GridFunction grid) {
    ConvexFunctionSpec s;
    s.family = Family::Tabulated;
    s.dim = grid.dim;
    s.grid = std::make_shared<GridFunction>(std::move(grid));
    return s;
}

ConvexFunctionSpec ConvexFunctionSpec::affine_image(const ConvexFunctionSpec& base, const Mat& s,
                                                    const Vec& t, const Vec& w, double c0) {
    require(s.n == base.dim && t.n == base.dim && w.n == base.dim,
            "affine_image: size mismatch");
    const double ds = det(s);
    require(std::isfinite(ds) && std::abs(ds) > 1e-14, "affine_image: S must be invertible");
    ConvexFunctionSpec r;
    r.family = Family::AffineImage;
    r.dim = base.dim;
    r.image_base = std::make_shared<ConvexFunctionSpec>(base);
    r.s = s;
    r.t = t;
    r.w = w;
    r.c0 = c0;
    return r;
}

ConvexFunctionSpec ConvexFunctionSpec::translated(const ConvexFunctionSpec& base, const Vec& shift) {
    if (base.family == Family::Quadratic) {
        // psi(x + t) stays quadratic: b' = At + b, c' = psi(t).
        Vec b2 = matvec(base.a, shift) + base.b;
        const double c2 = 0.5 * quadform(base.a, shift) + dot(base.b, shift) + base.c;
        return quadratic(base.a, b2, c2);
    }
    if (base.family == Family::Tabulated) {
        // Shift the box instead of wrapping: same samples, moved support.
        GridFunction g = *base.grid;
        g.lower = g.lower - shift;
        g.upper = g.upper - shift;
        return tabulated(std::move(g));
    }
    return affine_image(base, Mat::identity(base.dim), shift, Vec::zero(base.dim), 0.0);
}

ConvexFunctionSpec ConvexFunctionSpec::linear_image(const ConvexFunctionSpec& base, const Mat& s) {
    if (base.family == Family::Quadratic) {
        Mat a2 = matmul(transpose(s), matmul(base.a, s));
        // Symmetrize against roundoff; S^T A S is symmetric exactly.
        for (int i = 0; i < a2.n; ++i)
            for (int j = i + 1; j < a2.n; ++j)
                a2(i, j) = a2(j, i) = 0.5 * (a2(i, j) + a2(j, i));
        return quadratic(a2, matvec(transpose(s), base.b), base.c);
    }
    return affine_image(base, s, Vec::zero(base.dim), Vec::zero(base.dim), 0.0);
}

double evaluate(const ConvexFunctionSpec& spec, const Vec& x) {
    switch (spec.family) {
        case Family::Quadratic:
            return 0.5 * quadform(spec.a, x) + dot(spec.b, x) + spec.c;
        case Family::PowerSum: {
            double s = 0;
            for (int i = 0; i < spec.dim; ++i) s += powabs(x[i], spec.p);
            return spec.scale * s + spec.offset;
        }
        case Family::GaugeSquare: {
            const double g = body_gauge(*spec.body, x);
            return 0.5 * g * g;
        }
        case Family::Tabulated: {
            if (!spec.grid->inside(x))
                throw DomainError("evaluate: point outside tabulated grid");
            return spec.grid->value_at(x);
        }
        case Family::AffineImage: {
            Vec z = matvec(spec.s, x) + spec.t;
            return evaluate(*spec.image_base, z) + dot(spec.w, x) + spec.c0;
        }
    }
    throw ParameterError("evaluate: unknown family");
}

DiffBundle differentials(const ConvexFunctionSpec& spec, const Vec& x) {
    DiffBundle d;
    d.gradient = Vec(spec.dim);
    d.hessian = Mat(spec.dim);
    bool family_regular = true;

    switch (spec.family) {
        case Family::Quadratic:
            d.value = evaluate(spec, x);
            d.gradient = matvec(spec.a, x) + spec.b;
            d.hessian = spec.a;
            break;

        case Family::PowerSum: {
            d.value = evaluate(spec, x);
            const double p = spec.p, s = spec.scale;
            for (int i = 0; i < spec.dim; ++i) {
                const double ax = std::abs(x[i]);
                if (p < 2.0 && ax < kKinkRadius) family_regular = false;
                const double sg = x[i] >= 0 ? 1.0 : -1.0;
                d.gradient[i] = ax > 0 ? s * p * std::pow(ax, p - 1) * sg : 0.0;
                d.hessian(i, i) = ax > 0 ? s * p * (p - 1) * std::pow(ax, p - 2)
                                         : (p == 2.0 ? 2 * s : 0.0);
            }
            break;
        }

        case Family::GaugeSquare: {
            const BodySpec& k = *spec.body;
            if (norm(x) < kKinkRadius) {
                // Gauge^2 is C^{1,1} but not C^2 at the origin (the Hessian
                // is 0-homogeneous); value and gradient are still exact.
                d.value = evaluate(spec, x);
                family_regular = false;
                break;
            }
            if (k.family == BodyFamily::Ellipsoid) {
                d.value = 0.5 * quadform(k.a, x);
                d.gradient = matvec(k.a, x);
                d.hessian = k.a;
            } else if (k.family == BodyFamily::PBall) {
                const double p = k.p;
                double u = 0;
                Vec du(spec.dim);
                Vec wv(spec.dim);
                for (int i = 0; i < spec.dim; ++i) {
                    wv[i] = std::pow(k.radii[i], -p);
                    const double ax = std::abs(x[i]);
                    if (p < 2.0 && ax < kKinkRadius) family_regular = false;
                    u += wv[i] * std::pow(ax, p);
                    du[i] = ax > 0 ? p * wv[i] * std::pow(ax, p - 1) * (x[i] >= 0 ? 1.0 : -1.0)
                                   : 0.0;
                }
                d.value = 0.5 * std::pow(u, 2.0 / p);
                const double u1 = std::pow(u, 2.0 / p - 1.0);
                const double u2 = std::pow(u, 2.0 / p - 2.0);
                for (int i = 0; i < spec.dim; ++i) {
                    d.gradient[i] = (1.0 / p) * u1 * du[i];
                    for (int j = 0; j < spec.dim; ++j) {
                        double h = (1.0 / p) * (2.0 / p - 1.0) * u2 * du[i] * du[j];
                        if (i == j) {
                            const double ax = std::abs(x[i]);
                            h += u1 * (p - 1) * wv[i] * (ax > 0 ? std::pow(ax, p - 2) : 0.0);
                        }
                        d.hessian(i, j) = h;
                    }
                }
            } else {
                d.value = evaluate(spec, x);
                fd_derivatives([&](const Vec& z) { return evaluate(spec, z); }, x,
                               d.gradient, d.hessian);
            }
            break;
        }

        case Family::Tabulated: {
            const GridFunction& g = *spec.grid;
            if (!g.inside(x)) throw DomainError("differentials: point outside tabulated grid");
            d.value = g.value_at(x);
            // Steps of one grid cell: smaller steps would differentiate the
            // interpolant, not the data.
            bool stencil_ok = true;
            Vec h(spec.dim);
            for (int i = 0; i < spec.dim; ++i) h[i] = g.spacing(i);
            auto probe = [&](Vec z) -> double {
                if (!g.inside(z)) { stencil_ok = false; return d.value; }
                return g.value_at(z);
            };
            for (int i = 0; i < spec.dim; ++i) {
                Vec xp = x, xm = x;
                xp[i] += h[i];
                xm[i] -= h[i];
                const double fp = probe(xp), fm = probe(xm);
                d.gradient[i] = (fp - fm) / (2 * h[i]);
                d.hessian(i, i) = (fp - 2 * d.value + fm) / (h[i] * h[i]);
            }
            for (int i = 0; i < spec.dim; ++i)
                for (int j = i + 1; j < spec.dim; ++j) {
                    Vec xpp = x, xpm = x, xmp = x, xmm = x;
                    xpp[i] += h[i]; xpp[j] += h[j];
                    xpm[i] += h[i]; xpm[j] -= h[j];
                    xmp[i] -= h[i]; xmp[j] += h[j];
                    xmm[i] -= h[i]; xmm[j] -= h[j];
                    d.hessian(i, j) = d.hessian(j, i) =
                        (probe(xpp) - probe(xpm) - probe(xmp) + probe(xmm)) / (4 * h[i] * h[j]);
                }
            family_regular = stencil_ok;
            break;
        }

        case Family::AffineImage: {
            DiffBundle bd = differentials(*spec.image_base, matvec(spec.s, x) + spec.t);
            d.value = bd.value + dot(spec.w, x) + spec.c0;
            d.gradient = matvec(transpose(spec.s), bd.gradient) + spec.w;
            d.hessian = matmul(transpose(spec.s), matmul(bd.hessian, spec.s));
            for (int i = 0; i < d.hessian.n; ++i)
                for (int j = i + 1; j < d.hessian.n; ++j)
                    d.hessian(i, j) = d.hessian(j, i) = 0.5 * (d.hessian(i, j) + d.hessian(j, i));
            family_regular = bd.regular;
            break;
        }
    }

    finish_bundle(d, family_regular);
    return d;
}

ConvexFunctionSpec legendre(const ConvexFunctionSpec& spec) {
    switch (spec.family) {
        case Family::Quadratic: {
            // (psi)*(y) = <A^{-1}(y-b), y-b>/2 - c
            Mat ai = inverse(spec.a);
            for (int i = 0; i < ai.n; ++i)
                for (int j = i + 1; j < ai.n; ++j)
                    ai(i, j) = ai(j, i) = 0.5 * (ai(i, j) + ai(j, i));
            Vec b2 = -1.0 * matvec(ai, spec.b);
            const double c2 = 0.5 * dot(matvec(ai, spec.b), spec.b) - spec.c;
            return ConvexFunctionSpec::quadratic(ai, b2, c2);
        }
        case Family::PowerSum: {
            // (s|x|^p)* = ((sp)^{1-q}/q) |y|^q per axis, q the conjugate exponent.
            const double q = spec.p / (spec.p - 1.0);
            const double alpha = spec.scale * spec.p;
            const double s2 = std::pow(alpha, 1.0 - q) / q;
            return ConvexFunctionSpec::power_sum(spec.dim, q, s2, -spec.offset);
        }
        case Family::GaugeSquare:
            // (||.||_K^2/2)* = ||.||_{K°}^2/2
            return ConvexFunctionSpec::gauge_square(polar_body(*spec.body));
        case Family::Tabulated:
            return ConvexFunctionSpec::tabulated(discrete_legendre(*spec.grid));
        case Family::AffineImage: {
            // (base(Sx+t) + <w,x> + c0)* = base*(S^{-T}(y-w)) - <t,S^{-T}(y-w)> - c0
            Mat sit = transpose(inverse(spec.s));
            ConvexFunctionSpec dual_base = legendre(*spec.image_base);
            Vec t2 = -1.0 * matvec(sit, spec.w);
            Vec w2 = -1.0 * matvec(transpose(sit), spec.t);
            const double c2 = dot(spec.t, matvec(sit, spec.w)) - spec.c0;
            return ConvexFunctionSpec::affine_image(dual_base, sit, t2, w2, c2);
        }
    }
    throw ParameterError("legendre: unknown family");
}

ConvexFunctionSpec polar_log_concave(const ConvexFunctionSpec& spec) { return legendre(spec); }

double envelope_check(const ConvexFunctionSpec& spec, const std::vector<Vec>& points) {
    const ConvexFunctionSpec dual = legendre(spec);
    double worst = 0.0;
    for (const Vec& x : points) {
        DiffBundle d = differentials(spec, x);
        if (!d.regular) continue;
        double dual_val;
        if (dual.family == Family::Tabulated && !dual.grid->inside(d.gradient)) continue;
        dual_val = evaluate(dual, d.gradient);
        const double env = dot(x, d.gradient) - d.value;
        worst = std::max(worst, std::abs(dual_val - env));
    }
    return worst;
}

GridFunction tabulate(const ConvexFunctionSpec& spec, const Vec& lower, const Vec& upper,
                      const std::array<int, kMaxDim>& points) {
    GridFunction g;
    g.dim = spec.dim;
    g.lower = lower;
    g.upper = upper;
    g.points = {1, 1, 1};
    for (int a = 0; a < spec.dim; ++a) g.points[size_t(a)] = points[size_t(a)];
    size_t total = 1;
    for (int a = 0; a < spec.dim; ++a) total *= size_t(g.points[size_t(a)]);
    std::vector<double> vals(total);
    const int pj = spec.dim > 1 ? g.points[1] : 1;
    const int pk = spec.dim > 2 ? g.points[2] : 1;
    for (int i = 0; i < g.points[0]; ++i)
        for (int j = 0; j < pj; ++j)
            for (int k = 0; k < pk; ++k) {
                Vec x(spec.dim);
                x[0] = g.coord(0, i);
                if (spec.dim > 1) x[1] = g.coord(1, j);
                if (spec.dim > 2) x[2] = g.coord(2, k);
                vals[g.index(i, j, k)] = evaluate(spec, x);
            }
    return GridFunction::create(spec.dim, lower, upper, g.points, std::move(vals));
}

} // namespace lcgeom
