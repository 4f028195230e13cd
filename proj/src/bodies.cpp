#include "lcgeom/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lcgeom/convex.hpp"
#include "lcgeom/errors.hpp"
#include "lcgeom/quadrature.hpp"
#include "lcgeom/reduce.hpp"

namespace lcgeom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
    if (!cond) throw ParameterError(msg);
}

// rho(theta) = 1 + eps sum_k (c_k cos(k th) + s_k sin(k th)), k from 1, with
// exact first and second derivatives.
void trig_radial(const BodySpec& k, double th, double& r, double& r1, double& r2) {
    r = 1.0;
    r1 = r2 = 0.0;
    for (size_t j = 0; j < k.cos_coeffs.size(); ++j) {
        const double f = double(j + 1);
        r += k.epsilon * k.cos_coeffs[j] * std::cos(f * th);
        r1 -= k.epsilon * k.cos_coeffs[j] * f * std::sin(f * th);
        r2 -= k.epsilon * k.cos_coeffs[j] * f * f * std::cos(f * th);
    }
    for (size_t j = 0; j < k.sin_coeffs.size(); ++j) {
        const double f = double(j + 1);
        r += k.epsilon * k.sin_coeffs[j] * std::sin(f * th);
        r1 += k.epsilon * k.sin_coeffs[j] * f * std::cos(f * th);
        r2 -= k.epsilon * k.sin_coeffs[j] * f * f * std::sin(f * th);
    }
}

double direction_angle(const BodySpec& k, const Vec& u) {
    // n = 2: plane angle; n = 3 (zonal profile): polar angle.
    if (k.dim == 2) return std::atan2(u[1], u[0]);
    return std::acos(std::clamp(u[2] / std::max(norm(u), 1e-300), -1.0, 1.0));
}

double perturbed_rho(const BodySpec& k, const Vec& unit) {
    double r, r1, r2;
    trig_radial(k, direction_angle(k, unit), r, r1, r2);
    return r;
}

// max over theta of rho(theta) cos(theta - a): coarse scan, then golden
// section inside the winning cell. For a zonal 3D body this is the support
// in any direction with polar angle a (azimuth aligns freely).
double support_scan(const BodySpec& k, double a) {
    auto val = [&](double th) {
        double r, r1, r2;
        trig_radial(k, th, r, r1, r2);
        return r * std::cos(th - a);
    };
    const int m = 2048;
    double best = -kInf, best_th = a;
    for (int i = 0; i < m; ++i) {
        const double th = 2.0 * M_PI * i / m;
        const double v = val(th);
        if (v > best) {
            best = v;
            best_th = th;
        }
    }
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = best_th - 2.0 * M_PI / m, hi = best_th + 2.0 * M_PI / m;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = val(x1), f2 = val(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = val(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = val(x1);
        }
    }
    return std::max(f1, f2);
}

} // namespace

BodySpec BodySpec::ellipsoid(const Mat& a) {
    require(a.n >= 1 && a.n <= kMaxDim, "ellipsoid: dimension must be 1..3");
    double ld;
    require(cholesky_logdet(a, ld), "ellipsoid: matrix must be symmetric positive definite");
    BodySpec k;
    k.family = BodyFamily::Ellipsoid;
    k.dim = a.n;
    k.a = a;
    return k;
}

BodySpec BodySpec::pball(int dim, double p, const Vec& radii) {
    require(dim >= 1 && dim <= kMaxDim, "pball: dimension must be 1..3");
    require(p > 1.0, "pball: exponent must exceed 1");
    require(radii.n == dim, "pball: radii size mismatch");
    for (int i = 0; i < dim; ++i) require(radii[i] > 0.0, "pball: radii must be positive");
    BodySpec k;
    k.family = BodyFamily::PBall;
    k.dim = dim;
    k.p = p;
    k.radii = radii;
    return k;
}

BodySpec BodySpec::perturbed_sphere(int dim, double epsilon, std::vector<double> cos_coeffs,
                                    std::vector<double> sin_coeffs) {
    require(dim == 2 || dim == 3, "perturbed_sphere: dimension must be 2 or 3");
    require(dim == 2 || sin_coeffs.empty(),
            "perturbed_sphere: 3D profile is zonal (cosine coefficients only)");
    BodySpec k;
    k.family = BodyFamily::PerturbedSphere;
    k.dim = dim;
    k.epsilon = epsilon;
    k.cos_coeffs = std::move(cos_coeffs);
    k.sin_coeffs = std::move(sin_coeffs);

    // Positivity and convexity of the radial profile: the planar curvature
    // numerator rho^2 + 2 rho'^2 - rho rho'' must stay positive. For the 3D
    // zonal case this is the profile curve; positivity of rho then keeps the
    // azimuthal principal curvature positive too.
    for (int i = 0; i < 4096; ++i) {
        const double th = 2.0 * M_PI * (i + 0.5) / 4096;
        double r, r1, r2;
        trig_radial(k, th, r, r1, r2);
        require(r > 0.05, "perturbed_sphere: radial function vanishes");
        require(r * r + 2 * r1 * r1 - r * r2 > 1e-8,
                "perturbed_sphere: perturbation breaks convexity");
    }
    return k;
}

BodySpec BodySpec::polar_of(const BodySpec& k) {
    if (k.family == BodyFamily::PolarWrap) return *k.base; // bipolar
    BodySpec r;
    r.family = BodyFamily::PolarWrap;
    r.dim = k.dim;
    r.base = std::make_shared<BodySpec>(k);
    return r;
}

BodySpec polar_body(const BodySpec& k) {
    switch (k.family) {
        case BodyFamily::Ellipsoid: return BodySpec::ellipsoid(inverse(k.a));
        case BodyFamily::PBall: {
            const double q = k.p / (k.p - 1.0);
            Vec inv(k.dim);
            for (int i = 0; i < k.dim; ++i) inv[i] = 1.0 / k.radii[i];
            return BodySpec::pball(k.dim, q, inv);
        }
        default: return BodySpec::polar_of(k);
    }
}

double body_gauge(const BodySpec& k, const Vec& x) {
    switch (k.family) {
        case BodyFamily::Ellipsoid: return std::sqrt(std::max(0.0, quadform(k.a, x)));
        case BodyFamily::PBall: {
            double s = 0;
            for (int i = 0; i < k.dim; ++i) s += std::pow(std::abs(x[i] / k.radii[i]), k.p);
            return std::pow(s, 1.0 / k.p);
        }
        case BodyFamily::PerturbedSphere: {
            const double nx = norm(x);
            if (nx == 0.0) return 0.0;
            return nx / perturbed_rho(k, (1.0 / nx) * x);
        }
        case BodyFamily::PolarWrap: return body_support(*k.base, x);
    }
    throw ParameterError("body_gauge: unknown family");
}

double body_support(const BodySpec& k, const Vec& u) {
    switch (k.family) {
        case BodyFamily::Ellipsoid: return std::sqrt(std::max(0.0, quadform(inverse(k.a), u)));
        case BodyFamily::PBall: {
            const double q = k.p / (k.p - 1.0);
            double s = 0;
            for (int i = 0; i < k.dim; ++i) s += std::pow(std::abs(u[i] * k.radii[i]), q);
            return std::pow(s, 1.0 / q);
        }
        case BodyFamily::PerturbedSphere: {
            const double nu = norm(u);
            if (nu == 0.0) return 0.0;
            return nu * support_scan(k, direction_angle(k, (1.0 / nu) * u));
        }
        case BodyFamily::PolarWrap: return body_gauge(*k.base, u);
    }
    throw ParameterError("body_support: unknown family");
}

double body_radial(const BodySpec& k, const Vec& u) {
    const double g = body_gauge(k, u);
    if (!(g > 0)) throw DomainError("body_radial: direction has zero gauge");
    return 1.0 / g;
}

double unit_ball_volume(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return M_PI;
        case 3: return 4.0 * M_PI / 3.0;
    }
    throw ParameterError("unit_ball_volume: dimension must be 1..3");
}

namespace {

std::vector<BoundaryPoint> sample_direct(const BodySpec& body, int m) {
    const int n = body.dim;
    const ConvexFunctionSpec psi = ConvexFunctionSpec::gauge_square(body);
    std::vector<BoundaryPoint> pts;

    // Radial parametrization of the boundary over directions u carries the
    // measure dmu = r^{n-1} / <u, N> dsigma(u), sigma the sphere measure.
    auto push = [&](const Vec& u, double dsigma) {
        const double r = body_radial(body, u);
        BoundaryPoint b;
        b.x = r * u;
        const DiffBundle d = differentials(psi, b.x);
        const double gn = norm(d.gradient);
        b.normal = (1.0 / gn) * d.gradient;
        b.support = dot(b.x, b.normal);
        b.curvature = std::max(0.0, d.hessian_det) * std::pow(b.support, n + 1);
        b.weight = std::pow(r, n - 1) * dsigma / dot(u, b.normal);
        pts.push_back(b);
    };

    if (n == 2) {
        pts.reserve(size_t(m));
        for (int j = 0; j < m; ++j) {
            const double th = 2.0 * M_PI * (j + 0.5) / m;
            push(Vec{std::cos(th), std::sin(th)}, 2.0 * M_PI / m);
        }
    } else if (n == 3) {
        std::vector<double> tn, tw;
        gauss_legendre(m, tn, tw);
        const int mphi = 2 * m;
        pts.reserve(size_t(m) * size_t(mphi));
        for (int i = 0; i < m; ++i) {
            const double ct = tn[size_t(i)];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (int j = 0; j < mphi; ++j) {
                const double ph = 2.0 * M_PI * (j + 0.5) / mphi;
                push(Vec{st * std::cos(ph), st * std::sin(ph), ct},
                     tw[size_t(i)] * 2.0 * M_PI / mphi);
            }
        }
    } else {
        throw ParameterError("boundary_sample: dimension must be 2 or 3");
    }
    return pts;
}

// Polar boundary data from the base sample: x -> y = N / <x,N> lies on the
// polar boundary with normal x/|x|, support 1/|x| and curvature
// <x,N>^{n+1} / (curvature(x) |x|^{n+1}) (Legendre inverts the Hessian).
// The measure transforms by the cone-measure identity q° dmu° = p dmu.
std::vector<BoundaryPoint> sample_polar(const BodySpec& base, int m) {
    const int n = base.dim;
    std::vector<BoundaryPoint> out = boundary_sample(base, m);
    for (BoundaryPoint& b : out) {
        const BoundaryPoint src = b;
        const double nx = norm(src.x);
        b.x = (1.0 / src.support) * src.normal;
        b.normal = (1.0 / nx) * src.x;
        b.support = 1.0 / nx;
        b.curvature = src.curvature > 0 ? std::pow(src.support, n + 1) /
                                              (src.curvature * std::pow(nx, n + 1))
                                        : kInf;
        b.weight = src.weight * src.curvature / std::pow(src.support, n) * nx;
    }
    return out;
}

int default_nodes(const BodySpec& body) { return body.dim == 2 ? 4096 : 80; }

double boundary_sum(const std::vector<BoundaryPoint>& pts,
                    const std::function<double(const BoundaryPoint&)>& f) {
    std::vector<double> c(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) c[i] = f(pts[i]) * pts[i].weight;
    return pairwise_sum(c);
}

} // namespace

std::vector<BoundaryPoint> boundary_sample(const BodySpec& body, int m) {
    if (m <= 0) m = default_nodes(body);
    if (body.family == BodyFamily::PolarWrap) return sample_polar(*body.base, m);
    return sample_direct(body, m);
}

IntegralResult boundary_integral(const BodySpec& body, int m,
                                 const std::function<double(const BoundaryPoint&)>& f) {
    if (m <= 0) m = default_nodes(body);
    const double fine = boundary_sum(boundary_sample(body, m), f);
    const double crude = boundary_sum(boundary_sample(body, m / 2), f);
    IntegralResult r;
    r.value = fine;
    r.error_estimate = std::abs(fine - crude) +
                       4 * std::numeric_limits<double>::epsilon() * std::abs(fine);
    r.regular_fraction = 1.0;
    return r;
}

double body_volume(const BodySpec& body, int m) {
    return boundary_integral(body, m,
                             [&](const BoundaryPoint& b) { return b.support / body.dim; })
        .value;
}

double body_polar_volume(const BodySpec& body, int m) {
    return boundary_integral(body, m,
                             [&](const BoundaryPoint& b) {
                                 return b.curvature / std::pow(b.support, body.dim) / body.dim;
                             })
        .value;
}

namespace {

// Kink exponent of the gauge: the curvature of a p-ball vanishes (p > 2) or
// blows up (p < 2) like dist^{p-2} at the touching points of the axes.
double body_kink(const BodySpec& body) {
    switch (body.family) {
        case BodyFamily::PBall: return body.p;
        case BodyFamily::PolarWrap: {
            const double p = body_kink(*body.base);
            return p == 2.0 ? 2.0 : p / (p - 1.0);
        }
        default: return 2.0;
    }
}

} // namespace

IntegralResult body_affine_surface_area(const BodySpec& body, double p, int m) {
    const int n = body.dim;
    if (p == -double(n))
        throw ParameterError("body_affine_surface_area: exponent -n is excluded");
    double gamma, delta;
    if (std::isinf(p)) {
        gamma = 1.0;
        delta = -double(n);
    } else {
        gamma = p / (n + p);
        delta = double(n) * (1.0 - p) / (n + p);
    }

    // Curvature power integrable across a p-ball kink iff (p_gauge - 2) gamma > -1.
    const double kink = body_kink(body);
    if (kink != 2.0 && (kink - 2.0) * gamma <= -1.0) return {kInf, 0.0, 1.0};

    double dropped = 0.0, total = 0.0;
    IntegralResult r = boundary_integral(body, m, [&](const BoundaryPoint& b) {
        total += b.weight;
        const double sd = std::pow(b.support, delta);
        if (gamma == 0.0) return sd; // kappa^0 = 1 also at flat points
        if (gamma < 0.0 && b.curvature < 1e-12) {
            dropped += b.weight;
            return 0.0;
        }
        if (b.curvature <= 0.0) return 0.0; // kappa^gamma = 0 for gamma > 0
        if (std::isinf(b.curvature)) return gamma > 0.0 ? kInf : 0.0;
        return std::pow(b.curvature, gamma) * sd;
    });
    r.regular_fraction = total > 0 ? 1.0 - dropped / total : 1.0;
    return r;
}

IntegralResult body_f_divergence(const BodySpec& body, const DivergenceGenerator& gen, int m) {
    return boundary_integral(body, m, [&](const BoundaryPoint& b) {
        const double lr = std::log(b.curvature) - (body.dim + 1) * std::log(b.support);
        return gen.eval_log(lr) * b.support;
    });
}

} // namespace lcgeom
