#include "lcgeom/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lcgeom/errors.hpp"
#include "lcgeom/reduce.hpp"
#include "lcgeom/rng.hpp"

namespace lcgeom {

void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(size_t(m), 0.0);
    weights.assign(size_t(m), 0.0);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[size_t(m - 1 - i)] = x;
        nodes[size_t(i)] = -x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[size_t(i)] = weights[size_t(m - 1 - i)] = w;
    }
}

namespace {

struct Axis {
    std::vector<double> x, w;
};

void append_panel(Axis& ax, double a, double b, int m) {
    std::vector<double> n, w;
    gauss_legendre(m, n, w);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < m; ++i) {
        ax.x.push_back(mid + half * n[size_t(i)]);
        ax.w.push_back(half * w[size_t(i)]);
    }
}

// Half-axis [0, r] with panels graded geometrically toward 0; absorbs the
// |x|^alpha hyperplane singularities of curvature-power integrands for
// alpha > -0.7 or so at ~1e-6 relative accuracy.
constexpr int kGradeLevels = 14;
constexpr double kGradeRatio = 0.1;

void append_half_axis(Axis& ax, double r, int main_nodes, double sign) {
    double hi = r;
    append_panel(ax, sign * kGradeRatio * r, sign * hi, main_nodes);
    hi = kGradeRatio * r;
    for (int k = 1; k < kGradeLevels; ++k) {
        append_panel(ax, sign * hi * kGradeRatio, sign * hi, 8);
        hi *= kGradeRatio;
    }
    append_panel(ax, 0.0, sign * hi, 4);
}

Axis build_axis(double lo, double hi, int main_nodes) {
    Axis ax;
    if (lo < 0.0 && hi > 0.0) {
        append_half_axis(ax, hi, main_nodes, +1.0);
        append_half_axis(ax, -lo, main_nodes, -1.0);
    } else if (lo == 0.0 && hi > 0.0) {
        append_half_axis(ax, hi, main_nodes, +1.0);
    } else if (hi == 0.0 && lo < 0.0) {
        append_half_axis(ax, -lo, main_nodes, -1.0);
    } else {
        append_panel(ax, lo, hi, main_nodes);
    }
    // Negative-weight panels appear when sign flips the orientation.
    for (double& w : ax.w) w = std::abs(w);
    return ax;
}

struct Box {
    Vec lo, hi;
};

const ConvexFunctionSpec* core_spec(const ConvexFunctionSpec& spec) {
    const ConvexFunctionSpec* s = &spec;
    while (s->family == Family::AffineImage) s = s->image_base.get();
    return s;
}

Box integration_box(const ConvexFunctionSpec& spec, const QuadratureSpec& quad,
                    const std::function<double(const Vec&)>& exponent) {
    Box box;
    box.lo = Vec(spec.dim);
    box.hi = Vec(spec.dim);
    const ConvexFunctionSpec* core = core_spec(spec);
    if (core->family == Family::Tabulated) {
        if (core != &spec)
            throw NumericalError("integration over transformed tabulated specs not supported");
        for (int a = 0; a < spec.dim; ++a) {
            box.lo[a] = core->grid->lower[a];
            box.hi[a] = core->grid->upper[a];
        }
        return box;
    }
    double r = quad.half_width;
    if (r <= 0.0) {
        r = suggest_radius(spec.dim, exponent);
        if (!std::isfinite(r))
            throw NumericalError("weighted_integral: integrand does not decay (divergent)");
    }
    for (int a = 0; a < spec.dim; ++a) {
        box.lo[a] = -r;
        box.hi[a] = r;
    }
    return box;
}

IntegralResult tensor_gauss_once(const ConvexFunctionSpec& spec, const Integrand& integrand,
                                 const Box& box, int main_nodes, int jobs) {
    const int n = spec.dim;
    Axis axes[kMaxDim];
    size_t total = 1;
    for (int a = 0; a < n; ++a) {
        axes[a] = build_axis(box.lo[a], box.hi[a], main_nodes);
        total *= axes[a].x.size();
    }

    std::vector<double> contrib, good_weight(total), all_weight(total);
    auto eval_node = [&](size_t idx) {
        Vec x(n);
        size_t rest = idx;
        double w = 1.0;
        for (int a = n - 1; a >= 0; --a) {
            const size_t m = axes[a].x.size();
            const size_t i = rest % m;
            rest /= m;
            x[a] = axes[a].x[i];
            w *= axes[a].w[i];
        }
        all_weight[idx] = w;
        DiffBundle d;
        if (integrand.needs_derivatives) {
            d = differentials(spec, x);
        } else {
            d.value = evaluate(spec, x);
            d.regular = std::isfinite(d.value);
        }
        const double f = d.regular ? integrand.f(x, d) : std::nan("");
        if (!std::isfinite(f)) {
            good_weight[idx] = 0.0;
            return 0.0;
        }
        good_weight[idx] = w;
        return w * f;
    };
    parallel_fill(contrib, total, eval_node, jobs);

    IntegralResult res;
    res.value = pairwise_sum(contrib);
    const double wg = pairwise_sum(good_weight);
    const double wa = pairwise_sum(all_weight);
    res.regular_fraction = wa > 0 ? wg / wa : 1.0;
    return res;
}

} // namespace

double suggest_radius(int dim, const std::function<double(const Vec&)>& exponent, double drop,
                      double cap) {
    std::vector<Vec> dirs;
    int signs[kMaxDim];
    std::function<void(int)> rec = [&](int a) {
        if (a == dim) {
            Vec u(dim);
            bool zero = true;
            for (int i = 0; i < dim; ++i) {
                u[i] = signs[i];
                if (signs[i] != 0) zero = false;
            }
            if (!zero) {
                // Nudge off coordinate hyperplanes where Hessians degenerate.
                for (int i = 0; i < dim; ++i) u[i] += 0.0131 * (i + 1);
                dirs.push_back((1.0 / norm(u)) * u);
            }
            return;
        }
        for (int s = -1; s <= 1; ++s) {
            signs[a] = s;
            rec(a + 1);
        }
    };
    rec(0);

    double radius = 6.0;
    for (const Vec& u : dirs) {
        double e0 = -std::numeric_limits<double>::infinity();
        for (double r0 : {0.3, 0.5, 0.9}) {
            const double e = exponent(r0 * u);
            if (std::isfinite(e)) e0 = std::max(e0, e);
        }
        if (!std::isfinite(e0)) continue;
        const double target = e0 - drop;
        double r = 1.0;
        bool reached = false;
        while (r <= cap) {
            const double e = exponent(r * u);
            if (std::isfinite(e) && e <= target) {
                reached = true;
                break;
            }
            r *= 2.0;
        }
        if (!reached) return std::numeric_limits<double>::infinity();
        double lo = r / 2, hi = r;
        for (int it = 0; it < 50; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double e = exponent(mid * u);
            if (std::isfinite(e) && e <= target) hi = mid;
            else lo = mid;
        }
        radius = std::max(radius, hi);
    }
    return std::min(radius, cap);
}

IntegralResult weighted_integral(const ConvexFunctionSpec& spec, const Integrand& integrand,
                                 const QuadratureSpec& quad) {
    std::function<double(const Vec&)> envelope = integrand.log_envelope;
    if (!envelope)
        envelope = [&](const Vec& x) { return -evaluate(spec, x); };

    switch (quad.method) {
        case QuadMethod::TensorGauss: {
            if (quad.nodes < 32)
                throw ParameterError("tensor_gauss: need at least 32 nodes per axis");
            const Box box = integration_box(spec, quad, envelope);
            IntegralResult fine = tensor_gauss_once(spec, integrand, box, quad.nodes, quad.jobs);
            IntegralResult crude =
                tensor_gauss_once(spec, integrand, box, std::max(16, quad.nodes / 2), quad.jobs);
            fine.error_estimate = std::abs(fine.value - crude.value) +
                                  4 * std::numeric_limits<double>::epsilon() *
                                      std::abs(fine.value);
            if (fine.regular_fraction < 0.99)
                throw NumericalError("weighted_integral: more than 1% of quadrature weight on "
                                     "non-regular nodes");
            return fine;
        }

        case QuadMethod::MonteCarlo: {
            const Box box = integration_box(spec, quad, envelope);
            double vol = 1.0;
            for (int a = 0; a < spec.dim; ++a) vol *= box.hi[a] - box.lo[a];
            Rng rng(quad.seed);
            const size_t n = size_t(quad.samples);
            std::vector<Vec> pts(n);
            for (size_t i = 0; i < n; ++i) {
                Vec x(spec.dim);
                for (int a = 0; a < spec.dim; ++a) x[a] = rng.uniform(box.lo[a], box.hi[a]);
                pts[i] = x;
            }
            std::vector<double> fs(n), f2s(n), good(n);
            parallel_fill(fs, n, [&](size_t i) {
                DiffBundle d;
                if (integrand.needs_derivatives) {
                    d = differentials(spec, pts[i]);
                } else {
                    d.value = evaluate(spec, pts[i]);
                    d.regular = std::isfinite(d.value);
                }
                double f = d.regular ? integrand.f(pts[i], d) : 0.0;
                if (!std::isfinite(f)) f = 0.0;
                good[i] = (d.regular && std::isfinite(f)) ? 1.0 : 0.0;
                f2s[i] = f * f;
                return f;
            }, quad.jobs);
            const double mean = pairwise_sum(fs) / double(n);
            const double mean2 = pairwise_sum(f2s) / double(n);
            const double var = std::max(0.0, mean2 - mean * mean);
            IntegralResult res;
            res.value = vol * mean;
            res.error_estimate = vol * std::sqrt(var / double(n));
            res.regular_fraction = pairwise_sum(good) / double(n);
            if (res.regular_fraction < 0.99)
                throw NumericalError("weighted_integral: more than 1% of samples non-regular");
            return res;
        }

        case QuadMethod::AdaptiveRefine: {
            QuadratureSpec inner = quad;
            inner.method = QuadMethod::TensorGauss;
            inner.nodes = std::max(32, quad.nodes);
            IntegralResult prev = weighted_integral(spec, integrand, inner);
            for (int k = 0; k < quad.max_doublings; ++k) {
                inner.nodes *= 2;
                IntegralResult cur = weighted_integral(spec, integrand, inner);
                const double delta = std::abs(cur.value - prev.value);
                cur.error_estimate = delta;
                if (delta <= quad.target_rel_tol * std::max(std::abs(cur.value), 1e-300))
                    return cur;
                prev = cur;
            }
            if (prev.error_estimate >
                10 * quad.target_rel_tol * std::max(std::abs(prev.value), 1e-300))
                throw NumericalError("adaptive_refine: target tolerance unreachable");
            return prev;
        }
    }
    throw ParameterError("weighted_integral: unknown method");
}

IntegralResult mass(const ConvexFunctionSpec& spec, const QuadratureSpec& quad) {
    Integrand g{false, [](const Vec&, const DiffBundle& d) { return std::exp(-d.value); }, {}};
    return weighted_integral(spec, g, quad);
}

double entropy(const ConvexFunctionSpec& spec, const QuadratureSpec& quad) {
    const double m = mass(spec, quad).value;
    if (!(m > 0) || !std::isfinite(m)) throw NumericalError("entropy: mass not positive finite");
    Integrand g{false,
                [](const Vec&, const DiffBundle& d) { return d.value * std::exp(-d.value); },
                {}};
    const double s = weighted_integral(spec, g, quad).value;
    return -s / m - std::log(m);
}

double ent_gaussian(int dim) {
    return -0.5 * dim * std::log(2.0 * M_PI * std::exp(1.0));
}

Vec barycenter(const ConvexFunctionSpec& spec, const QuadratureSpec& quad) {
    const double m = mass(spec, quad).value;
    Vec c(spec.dim);
    for (int a = 0; a < spec.dim; ++a) {
        Integrand g{false,
                    [a](const Vec& x, const DiffBundle& d) { return x[a] * std::exp(-d.value); },
                    {}};
        c[a] = weighted_integral(spec, g, quad).value / m;
    }
    return c;
}

std::vector<Vec> sample_points(const ConvexFunctionSpec& spec, int count, std::uint64_t seed) {
    std::function<double(const Vec&)> envelope = [&](const Vec& x) {
        return -evaluate(spec, x);
    };
    QuadratureSpec q;
    const Box box = integration_box(spec, q, envelope);
    Rng rng(seed);
    const int g = std::max(1, int(std::ceil(std::pow(double(count), 1.0 / spec.dim))));
    std::vector<Vec> pts;
    pts.reserve(size_t(count));
    size_t cells = 1;
    for (int a = 0; a < spec.dim; ++a) cells *= size_t(g);
    for (size_t c = 0; c < cells && int(pts.size()) < count; ++c) {
        Vec x(spec.dim);
        size_t rest = c;
        for (int a = 0; a < spec.dim; ++a) {
            const size_t i = rest % size_t(g);
            rest /= size_t(g);
            const double h = (box.hi[a] - box.lo[a]) / g;
            x[a] = box.lo[a] + (double(i) + rng.uniform()) * h;
        }
        pts.push_back(x);
    }
    return pts;
}

} // namespace lcgeom
