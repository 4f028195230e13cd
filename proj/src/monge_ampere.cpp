#include "lcgeom/monge_ampere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lcgeom/divergence.hpp"
#include "lcgeom/errors.hpp"
#include "lcgeom/rng.hpp"

namespace lcgeom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSqrtTwoPi = 2.5066282746310005024157652848110;

// Composite Simpson for an odd number of uniformly spaced samples.
double simpson(const std::vector<double>& f, double h) {
    const size_t n = f.size();
    double s = f[0] + f[n - 1];
    for (size_t i = 1; i + 1 < n; ++i) s += f[i] * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Banded LU with partial pivoting, bandwidth 2 each side (fill-in widens
// the upper band to 4). Rows 0 and n-1 of the Newton systems reach two
// columns in, everything else is tridiagonal.
class BandSolver {
public:
    explicit BandSolver(int n) : n_(n), ab_(size_t(n) * 7, 0.0), piv_(size_t(n)) {}

    double& at(int i, int j) { return ab_[size_t(j) * 7 + size_t(4 + i - j)]; }

    void add_diag(double mu) {
        for (int i = 0; i < n_; ++i) at(i, i) += mu;
    }

    // Destroys the matrix; solves in place into rhs.
    void solve(std::vector<double>& rhs) {
        for (int k = 0; k + 1 < n_; ++k) {
            int p = k;
            for (int i = k + 1; i <= std::min(k + 2, n_ - 1); ++i)
                if (std::abs(at(i, k)) > std::abs(at(p, k))) p = i;
            piv_[size_t(k)] = p;
            if (p != k) {
                for (int j = k; j <= std::min(k + 4, n_ - 1); ++j) std::swap(at(k, j), at(p, j));
                std::swap(rhs[size_t(k)], rhs[size_t(p)]);
            }
            const double d = at(k, k);
            if (d == 0.0) throw NumericalError("ma solver: singular Newton system");
            for (int i = k + 1; i <= std::min(k + 2, n_ - 1); ++i) {
                const double m = at(i, k) / d;
                if (m == 0.0) continue;
                for (int j = k + 1; j <= std::min(k + 4, n_ - 1); ++j)
                    at(i, j) -= m * at(k, j);
                rhs[size_t(i)] -= m * rhs[size_t(k)];
            }
        }
        if (at(n_ - 1, n_ - 1) == 0.0)
            throw NumericalError("ma solver: singular Newton system");
        for (int i = n_ - 1; i >= 0; --i) {
            double s = rhs[size_t(i)];
            for (int j = i + 1; j <= std::min(i + 4, n_ - 1); ++j) s -= at(i, j) * rhs[size_t(j)];
            rhs[size_t(i)] = s / at(i, i);
        }
    }

private:
    int n_;
    std::vector<double> ab_;
    std::vector<int> piv_;
};

struct LineOps {
    std::vector<double> x;
    double h = 0.0;

    // Central differences inside, one-sided 3-point at the ends; both are
    // exact on quadratics, so the Gaussian family solves the discrete
    // system to machine precision.
    std::vector<double> d1(const std::vector<double>& f) const {
        const size_t n = f.size();
        std::vector<double> g(n);
        for (size_t i = 1; i + 1 < n; ++i) g[i] = (f[i + 1] - f[i - 1]) / (2 * h);
        g[0] = (-1.5 * f[0] + 2 * f[1] - 0.5 * f[2]) / h;
        g[n - 1] = (0.5 * f[n - 3] - 2 * f[n - 2] + 1.5 * f[n - 1]) / h;
        return g;
    }
    std::vector<double> d2(const std::vector<double>& f) const {
        const size_t n = f.size();
        std::vector<double> g(n);
        for (size_t i = 1; i + 1 < n; ++i) g[i] = (f[i + 1] - 2 * f[i] + f[i - 1]) / (h * h);
        g[0] = (f[0] - 2 * f[1] + f[2]) / (h * h);
        g[n - 1] = (f[n - 1] - 2 * f[n - 2] + f[n - 3]) / (h * h);
        return g;
    }
};

// Additive-quadratic mass gauge: finds tau with mass(psi + tau q) = target
// by bisection (the mass is strictly decreasing in tau).
void mass_gauge(std::vector<double>& psi, const std::vector<double>& q,
                const std::vector<double>& weight, double h, double target) {
    auto mass = [&](double t) {
        std::vector<double> f(psi.size());
        for (size_t i = 0; i < psi.size(); ++i)
            f[i] = std::exp(-psi[i] - t * q[i]) * weight[i];
        return simpson(f, h);
    };
    double lo = 0.0, hi = 0.0;
    if (mass(0.0) > target) {
        hi = 1.0;
        while (mass(hi) > target && hi < 1e6) hi *= 2;
    } else {
        lo = -0.25;
        while (mass(lo) < target && lo > -1e6) lo *= 2;
    }
    for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mass(mid) > target ? lo : hi) = mid;
    }
    const double tau = 0.5 * (lo + hi);
    for (size_t i = 0; i < psi.size(); ++i) psi[i] += tau * q[i];
}

GridFunction wrap_grid(const GridFunction& like, std::vector<double> values) {
    GridFunction g;
    g.dim = 1;
    g.lower = like.lower;
    g.upper = like.upper;
    g.points = like.points;
    g.values = std::move(values);
    return g;
}

void fit_quadratic(const std::vector<double>& t, const std::vector<double>& psi,
                   MASolution& out) {
    double num = 0, den = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        const double q = t[i] * t[i] / 2;
        num += psi[i] * q;
        den += q * q;
    }
    out.fitted_a = num / den;
    std::vector<double> e(t.size());
    double mean = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        e[i] = psi[i] - out.fitted_a * t[i] * t[i] / 2;
        mean += e[i];
    }
    mean /= double(t.size());
    double sup = 0;
    for (double v : e) sup = std::max(sup, std::abs(v - mean));
    out.fit_residual = sup;
}

} // namespace

MASolution solve_ma_1d(const GridFunction& initial, int max_iter, double damping) {
    if (initial.dim != 1) throw ParameterError("solve_ma_1d: expects a 1D grid");
    const int n = initial.points[0];
    if (n < 129 || n % 2 == 0)
        throw ParameterError("solve_ma_1d: grid needs an odd point count >= 129");
    if (std::abs(initial.lower[0] + initial.upper[0]) > 1e-9 * initial.upper[0])
        throw ParameterError("solve_ma_1d: grid box must be symmetric");

    LineOps ops;
    ops.h = initial.spacing(0);
    ops.x.resize(size_t(n));
    for (int i = 0; i < n; ++i) ops.x[size_t(i)] = initial.coord(0, i);
    const std::vector<double>& x = ops.x;
    const size_t mid = size_t(n / 2);

    std::vector<double> q(x.size()), ones(x.size(), 1.0);
    for (size_t i = 0; i < q.size(); ++i) q[i] = x[i] * x[i] / 2;

    auto gauge = [&](std::vector<double> psi) {
        for (size_t i = 0; i < psi.size() / 2; ++i) {
            const double e = 0.5 * (psi[i] + psi[psi.size() - 1 - i]);
            psi[i] = psi[psi.size() - 1 - i] = e;
        }
        const double c = psi[mid];
        for (double& v : psi) v -= c;
        mass_gauge(psi, q, ones, ops.h, kSqrtTwoPi);
        const double c2 = psi[mid];
        for (double& v : psi) v -= c2;
        return psi;
    };

    auto cconst = [&](const std::vector<double>& psi) {
        const std::vector<double> p1 = ops.d1(psi), p2 = ops.d2(psi);
        std::vector<double> fz(psi.size()), fs(psi.size());
        for (size_t i = 0; i < psi.size(); ++i) {
            fz[i] = std::exp(-psi[i]);
            fs[i] = std::exp(psi[i] - x[i] * p1[i]) * std::max(p2[i], 1e-12);
        }
        return simpson(fs, ops.h) / simpson(fz, ops.h);
    };

    // sup and e^{-psi}-weighted L1 of the defining residual
    // psi'' - C e^{-2 psi + x psi'}; may be infinite far from the solution.
    auto true_residual = [&](const std::vector<double>& psi, double C, double& sup,
                             double& l1) {
        const std::vector<double> p1 = ops.d1(psi), p2 = ops.d2(psi);
        std::vector<double> a(psi.size());
        sup = 0;
        for (size_t i = 0; i < psi.size(); ++i) {
            const double expo = -2 * psi[i] + x[i] * p1[i];
            const double F = expo > 700 ? -kInf : p2[i] - C * std::exp(expo);
            sup = std::max(sup, std::abs(F));
            const double w = std::exp(-psi[i]);
            a[i] = w > 0 ? std::abs(F) * w : 0.0;
        }
        l1 = simpson(a, ops.h);
    };

    MASolution out;
    std::vector<double> psi = gauge(initial.values);
    double prev = kInf, d = damping;
    int bad_streak = 0;
    for (int it = 0; it < max_iter; ++it) {
        const double C = cconst(psi);
        const std::vector<double> p1 = ops.d1(psi);
        std::vector<double> p2 = ops.d2(psi);
        for (double& v : p2) v = std::max(v, 1e-12);

        std::vector<double> G(psi.size());
        double res = 0;
        for (size_t i = 0; i < psi.size(); ++i) {
            G[i] = std::log(p2[i]) + 2 * psi[i] - x[i] * p1[i] - std::log(C);
            res = std::max(res, std::abs(G[i]));
        }
        double sup, l1;
        true_residual(psi, C, sup, l1);
        out.trace.push_back({it, sup, l1, C});
        if (sup < 1e-9) break;

        if (res > prev) {
            if (++bad_streak >= 20)
                throw DivergenceError("solve_ma_1d: residual grew for 20 iterations");
            d = std::max(d * 0.5, 0.05);
        } else {
            bad_streak = 0;
            d = damping;
        }
        prev = res;

        BandSolver J(n);
        for (int i = 0; i < n; ++i) {
            const double wi = 1.0 / p2[size_t(i)];
            if (i == 0) {
                J.at(0, 0) += wi / (ops.h * ops.h) - x[0] * (-1.5 / ops.h);
                J.at(0, 1) += wi * (-2 / (ops.h * ops.h)) - x[0] * (2 / ops.h);
                J.at(0, 2) += wi / (ops.h * ops.h) - x[0] * (-0.5 / ops.h);
            } else if (i == n - 1) {
                J.at(i, i - 2) += wi / (ops.h * ops.h) - x[size_t(i)] * (0.5 / ops.h);
                J.at(i, i - 1) += wi * (-2 / (ops.h * ops.h)) - x[size_t(i)] * (-2 / ops.h);
                J.at(i, i) += wi / (ops.h * ops.h) - x[size_t(i)] * (1.5 / ops.h);
            } else {
                J.at(i, i - 1) += wi / (ops.h * ops.h) - x[size_t(i)] * (-0.5 / ops.h);
                J.at(i, i) += wi * (-2 / (ops.h * ops.h));
                J.at(i, i + 1) += wi / (ops.h * ops.h) - x[size_t(i)] * (0.5 / ops.h);
            }
            J.at(i, i) += 2.0;
        }
        J.add_diag(1e-7 / (ops.h * ops.h));

        std::vector<double> step(G.size());
        for (size_t i = 0; i < G.size(); ++i) step[i] = -G[i];
        J.solve(step);
        for (size_t i = 0; i < psi.size(); ++i) psi[i] += d * step[i];
        psi = gauge(std::move(psi));
    }

    out.c_constant = cconst(psi);
    double sup, l1;
    true_residual(psi, out.c_constant, sup, l1);
    out.converged = sup <= 1e-8;
    double odd = 0;
    for (size_t i = 0; i < psi.size(); ++i)
        odd = std::max(odd, std::abs(0.5 * (psi[i] - psi[psi.size() - 1 - i])));
    out.odd_part = odd;
    fit_quadratic(x, psi, out);
    out.psi = wrap_grid(initial, std::move(psi));
    return out;
}

MASolution solve_ma_radial(const GridFunction& initial, int max_iter, double damping) {
    if (initial.dim != 1) throw ParameterError("solve_ma_radial: expects a 1D grid");
    const int n = initial.points[0];
    if (n < 65 || n % 2 == 0)
        throw ParameterError("solve_ma_radial: grid needs an odd point count >= 65");
    if (std::abs(initial.lower[0]) > 1e-12)
        throw ParameterError("solve_ma_radial: grid must start at r = 0");

    const double h = initial.spacing(0);
    std::vector<double> r(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) r[size_t(i)] = initial.coord(0, i);

    std::vector<double> q(r.size()), rw(r.size());
    for (size_t i = 0; i < q.size(); ++i) {
        q[i] = r[i] * r[i] / 2;
        rw[i] = r[i];
    }

    // u'(0) = 0 by symmetry; the r = 0 second difference uses the even
    // ghost u(-h) = u(h).
    auto d1 = [&](const std::vector<double>& f) {
        std::vector<double> g(f.size(), 0.0);
        for (size_t i = 1; i + 1 < f.size(); ++i) g[i] = (f[i + 1] - f[i - 1]) / (2 * h);
        g[f.size() - 1] =
            (0.5 * f[f.size() - 3] - 2 * f[f.size() - 2] + 1.5 * f[f.size() - 1]) / h;
        return g;
    };
    auto d2 = [&](const std::vector<double>& f) {
        std::vector<double> g(f.size());
        g[0] = 2 * (f[1] - f[0]) / (h * h);
        for (size_t i = 1; i + 1 < f.size(); ++i) g[i] = (f[i + 1] - 2 * f[i] + f[i - 1]) / (h * h);
        g[f.size() - 1] = (f[f.size() - 1] - 2 * f[f.size() - 2] + f[f.size() - 3]) / (h * h);
        return g;
    };
    auto slope = [&](const std::vector<double>& u1, const std::vector<double>& u2) {
        std::vector<double> s(u1.size());
        s[0] = u2[0];
        for (size_t i = 1; i < u1.size(); ++i) s[i] = u1[i] / r[i];
        return s;
    };

    auto gauge = [&](std::vector<double> u) {
        const double c = u[0];
        for (double& v : u) v -= c;
        mass_gauge(u, q, rw, h, 1.0); // 2 pi cancels: int e^{-u} r dr = 1
        const double c2 = u[0];
        for (double& v : u) v -= c2;
        return u;
    };

    auto cconst = [&](const std::vector<double>& u) {
        const std::vector<double> u1 = d1(u), u2 = d2(u);
        std::vector<double> fz(u.size()), fs(u.size());
        for (size_t i = 0; i < u.size(); ++i) {
            fz[i] = std::exp(-u[i]) * r[i];
            fs[i] = std::exp(u[i] - r[i] * u1[i]) * std::max(u2[i], 1e-12) *
                    std::max(u1[i], 0.0);
        }
        return simpson(fs, h) / simpson(fz, h);
    };

    auto true_residual = [&](const std::vector<double>& u, double C, double& sup,
                             double& l1) {
        const std::vector<double> u1 = d1(u), u2 = d2(u);
        const std::vector<double> s = slope(u1, u2);
        std::vector<double> a(u.size());
        sup = 0;
        for (size_t i = 0; i < u.size(); ++i) {
            const double expo = -2 * u[i] + r[i] * u1[i];
            const double F = expo > 700 ? -kInf : u2[i] * s[i] - C * std::exp(expo);
            sup = std::max(sup, std::abs(F));
            const double w = std::exp(-u[i]) * r[i] * kTwoPi;
            a[i] = w > 0 ? std::abs(F) * w : 0.0;
        }
        l1 = simpson(a, h);
    };

    MASolution out;
    std::vector<double> u = gauge(initial.values);
    double prev = kInf, d = damping;
    int bad_streak = 0;
    for (int it = 0; it < max_iter; ++it) {
        const double C = cconst(u);
        const std::vector<double> u1 = d1(u);
        std::vector<double> u2 = d2(u);
        for (double& v : u2) v = std::max(v, 1e-12);
        std::vector<double> s = slope(u1, u2);
        for (double& v : s) v = std::max(v, 1e-12);

        std::vector<double> G(u.size());
        double res = 0;
        for (size_t i = 0; i < u.size(); ++i) {
            if (i == 0)
                G[i] = 2 * std::log(u2[0]) + 2 * u[0] - std::log(C);
            else
                G[i] = std::log(u2[i]) + std::log(s[i]) + 2 * u[i] - r[i] * u1[i] -
                       std::log(C);
            res = std::max(res, std::abs(G[i]));
        }
        double sup, l1;
        true_residual(u, C, sup, l1);
        out.trace.push_back({it, sup, l1, C});
        if (sup < 1e-9) break;

        if (res > prev) {
            if (++bad_streak >= 20)
                throw DivergenceError("solve_ma_radial: residual grew for 20 iterations");
            d = std::max(d * 0.5, 0.05);
        } else {
            bad_streak = 0;
            d = damping;
        }
        prev = res;

        BandSolver J(n);
        // row 0: G = 2 ln u''(0) + 2u(0) - ln C, with u''(0) = 2(u1-u0)/h^2
        J.at(0, 0) += (2.0 / u2[0]) * (-2 / (h * h)) + 2.0;
        J.at(0, 1) += (2.0 / u2[0]) * (2 / (h * h));
        for (int i = 1; i < n; ++i) {
            const double wi = 1.0 / u2[size_t(i)];
            const double si = 1.0 / (s[size_t(i)] * r[size_t(i)]);
            if (i == n - 1) {
                const double c1[3] = {0.5 / h, -2 / h, 1.5 / h};
                const double c2[3] = {1 / (h * h), -2 / (h * h), 1 / (h * h)};
                for (int k = 0; k < 3; ++k)
                    J.at(i, i - 2 + k) +=
                        wi * c2[k] + si * c1[k] - r[size_t(i)] * c1[k];
            } else {
                J.at(i, i - 1) += wi / (h * h) + (si - r[size_t(i)]) * (-0.5 / h);
                J.at(i, i) += wi * (-2 / (h * h));
                J.at(i, i + 1) += wi / (h * h) + (si - r[size_t(i)]) * (0.5 / h);
            }
            J.at(i, i) += 2.0;
        }
        J.add_diag(1e-7 / (h * h));

        std::vector<double> step(G.size());
        for (size_t i = 0; i < G.size(); ++i) step[i] = -G[i];
        J.solve(step);
        for (size_t i = 0; i < u.size(); ++i) u[i] += d * step[i];
        u = gauge(std::move(u));
    }

    out.c_constant = cconst(u);
    double sup, l1;
    true_residual(u, out.c_constant, sup, l1);
    out.converged = sup <= 1e-8;
    out.odd_part = 0.0;
    fit_quadratic(r, u, out);
    out.psi = wrap_grid(initial, std::move(u));
    return out;
}

std::vector<GridFunction> default_ma_initials(int n_points, double radius, bool radial) {
    GridFunction proto;
    proto.dim = 1;
    proto.lower = Vec{radial ? 0.0 : -radius};
    proto.upper = Vec{radius};
    proto.points = {n_points, 1, 1};

    std::vector<double> t(static_cast<size_t>(n_points));
    for (int i = 0; i < n_points; ++i) t[size_t(i)] = proto.coord(0, i);

    std::vector<std::function<double(double)>> fns = {
        [](double v) { return v * v / 2; },
        [](double v) {
            return v * v / 2 + 0.3 * std::cos(M_PI * v / 2) * std::exp(-v * v / 8);
        },
        [](double v) { return v * v / 2 + 0.2 * std::cos(M_PI * v / 3) * std::exp(-v * v / 9); },
        [](double v) { return v * v; },
        [](double v) { return v * v / 4 + 0.1 * std::cos(v) * std::exp(-v * v / 16); },
        [](double v) { return v * v * v * v / 4; },
        [](double v) { return std::abs(v) * v * v / 3; },
        [](double v) { return std::cosh(v) - 1; },
    };
    std::vector<GridFunction> out;
    for (const auto& fn : fns) {
        GridFunction g = proto;
        g.values.resize(size_t(n_points));
        for (int i = 0; i < n_points; ++i) g.values[size_t(i)] = fn(t[size_t(i)]);
        out.push_back(std::move(g));
    }
    return out;
}

UniquenessReport uniqueness_probe(const std::vector<GridFunction>& initials,
                                  const std::vector<GridFunction>& radial_initials,
                                  int max_iter, double damping) {
    UniquenessReport rep;
    auto run_family = [&](const std::vector<GridFunction>& fam, bool radial,
                          std::vector<MASolution>& runs) {
        double worst = 0;
        for (const GridFunction& g : fam) {
            try {
                runs.push_back(radial ? solve_ma_radial(g, max_iter, damping)
                                      : solve_ma_1d(g, max_iter, damping));
            } catch (const Error& e) {
                rep.note += std::string(radial ? "radial" : "line") + " run failed: " +
                            e.what() + "; ";
            }
        }
        for (size_t i = 0; i < runs.size(); ++i)
            for (size_t j = i + 1; j < runs.size(); ++j) {
                const std::vector<double>&a = runs[i].psi.values, &b = runs[j].psi.values;
                double ma = std::accumulate(a.begin(), a.end(), 0.0) / double(a.size());
                double mb = std::accumulate(b.begin(), b.end(), 0.0) / double(b.size());
                double sup = 0;
                for (size_t k = 0; k < a.size(); ++k)
                    sup = std::max(sup, std::abs((a[k] - ma) - (b[k] - mb)));
                worst = std::max(worst, sup);
            }
        return worst;
    };
    rep.max_pairwise = run_family(initials, false, rep.line_runs);
    rep.max_pairwise_radial = run_family(radial_initials, true, rep.radial_runs);
    for (const MASolution& s : rep.line_runs)
        rep.max_odd_part = std::max(rep.max_odd_part, s.odd_part);

    bool all = !rep.line_runs.empty();
    for (const MASolution& s : rep.line_runs) all = all && s.converged;
    for (const MASolution& s : rep.radial_runs) all = all && s.converged;
    rep.agree = all && rep.max_pairwise <= 1e-4 && rep.max_pairwise_radial <= 1e-4 &&
                rep.note.empty();
    return rep;
}

namespace {

// Half-width of a box that captures the density e^{-psi} down to e^{-45}
// of its peak; grid boxes are used verbatim for tabulated functions.
double density_radius(const ConvexFunctionSpec& spec) {
    if (spec.family == Family::Tabulated) {
        double r = kInf;
        for (int a = 0; a < spec.dim; ++a)
            r = std::min(r, std::min(-spec.grid->lower[a], spec.grid->upper[a]));
        return r;
    }
    return suggest_radius(spec.dim,
                          [&](const Vec& x) { return -evaluate(spec, x); }, 45.0, 1e4);
}

struct Cdf1D {
    std::vector<double> xs, cdf;

    double operator()(double y) const {
        if (y <= xs.front()) return 0.0;
        if (y >= xs.back()) return 1.0;
        const auto it = std::upper_bound(xs.begin(), xs.end(), y);
        const size_t j = size_t(it - xs.begin());
        const double t = (y - xs[j - 1]) / (xs[j] - xs[j - 1]);
        return cdf[j - 1] + t * (cdf[j] - cdf[j - 1]);
    }

    double invert(double u) const {
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        size_t j = std::min(size_t(it - cdf.begin()), cdf.size() - 1);
        if (j == 0) j = 1;
        const double c0 = cdf[j - 1], c1 = cdf[j];
        const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
        return xs[j - 1] + t * (xs[j] - xs[j - 1]);
    }
};

Cdf1D tabulate_cdf(const std::function<double(double)>& density, double lo, double hi,
                   int m = 16385) {
    Cdf1D c;
    c.xs.resize(size_t(m));
    c.cdf.resize(size_t(m));
    const double h = (hi - lo) / (m - 1);
    std::vector<double> f(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        c.xs[size_t(i)] = lo + h * i;
        f[size_t(i)] = density(c.xs[size_t(i)]);
    }
    c.cdf[0] = 0;
    for (int i = 1; i < m; ++i)
        c.cdf[size_t(i)] = c.cdf[size_t(i - 1)] + 0.5 * h * (f[size_t(i)] + f[size_t(i - 1)]);
    const double z = c.cdf.back();
    if (!(z > 0)) throw NumericalError("pushforward: degenerate density");
    for (double& v : c.cdf) v /= z;
    return c;
}

double safe_density(const ConvexFunctionSpec& spec, const Vec& x) {
    try {
        return std::exp(-evaluate(spec, x));
    } catch (const Error&) {
        return 0.0;
    }
}

double ks_statistic(std::vector<double>& sample, const Cdf1D& target) {
    std::sort(sample.begin(), sample.end());
    const double n = double(sample.size());
    double d = 0;
    for (size_t i = 0; i < sample.size(); ++i) {
        const double F = target(sample[i]);
        d = std::max(d, std::max(std::abs(F - double(i) / n),
                                 std::abs(double(i + 1) / n - F)));
    }
    return d;
}

TransportCheck pushforward_1d(const ConvexFunctionSpec& spec, int count,
                              std::uint64_t seed) {
    TransportCheck out;
    out.sample_count = count;
    out.threshold = 1.63 / std::sqrt(double(count));

    const double R = density_radius(spec);
    const Cdf1D mu = tabulate_cdf(
        [&](double t) { return safe_density(spec, Vec{t}); }, -R, R);

    const ConvexFunctionSpec dual = legendre(spec);
    const double Rd = density_radius(dual);
    const Cdf1D nu = tabulate_cdf(
        [&](double t) { return safe_density(dual, Vec{t}); }, -Rd, Rd);

    Rng rng(seed);
    std::vector<double> pushed(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double xi = mu.invert(rng.uniform());
        pushed[size_t(i)] = differentials(spec, Vec{xi}).gradient[0];
    }
    out.pushed.reserve(size_t(count));
    for (double y : pushed) out.pushed.push_back(Vec{y});

    double mean = 0;
    for (double y : pushed) mean += y;
    mean /= double(count);
    double var = 0;
    for (double y : pushed) var += (y - mean) * (y - mean);
    var /= double(count);
    // target moments from the tabulated dual density
    double zm = 0, z1 = 0, z2 = 0;
    for (size_t i = 0; i < nu.xs.size(); ++i) {
        const double w = safe_density(dual, Vec{nu.xs[i]});
        zm += w;
        z1 += w * nu.xs[i];
        z2 += w * nu.xs[i] * nu.xs[i];
    }
    const double tm = z1 / zm, tv = z2 / zm - tm * tm;
    out.moment_mismatch["mean_0"] = std::abs(mean - tm);
    out.moment_mismatch["cov_00"] = std::abs(var - tv);

    out.ks = ks_statistic(pushed, nu);
    out.pass = out.ks <= out.threshold;
    return out;
}

TransportCheck pushforward_2d(const ConvexFunctionSpec& spec, int count,
                              std::uint64_t seed) {
    TransportCheck out;
    out.sample_count = count;
    out.threshold = 1.63 / std::sqrt(double(count));

    QuadratureSpec quad = QuadratureSpec::gauss(96);
    const IntegralResult m0 = mass(spec, quad);
    const Vec mu = barycenter(spec, quad);
    auto moment = [&](int a, int b) {
        Integrand ig;
        ig.f = [&, a, b](const Vec& x, const DiffBundle& d) {
            return (x[a] - mu[a]) * (x[b] - mu[b]) * std::exp(-d.value);
        };
        return weighted_integral(spec, ig, quad).value / m0.value;
    };
    Mat cov(2);
    cov(0, 0) = moment(0, 0);
    cov(1, 1) = moment(1, 1);
    cov(0, 1) = cov(1, 0) = moment(0, 1);

    // Gaussian envelope with inflated covariance; the ratio bound comes
    // from a deterministic scan.
    const Mat env = 1.5 * cov;
    const Mat envinv = inverse(env);
    const double envdet = det(env);
    auto gdens = [&](const Vec& x) {
        const Vec dxy = x - mu;
        return std::exp(-0.5 * quadform(envinv, dxy)) / (kTwoPi * std::sqrt(envdet));
    };
    double ratio = 0;
    for (const Vec& p : sample_points(spec, 4096, seed ^ 0x9e3779b97f4a7c15ull))
        ratio = std::max(ratio, safe_density(spec, p) / gdens(p));
    double bound = 1.3 * ratio;

    // Cholesky of the 2x2 envelope.
    const double l00 = std::sqrt(env(0, 0));
    const double l10 = env(0, 1) / l00;
    const double l11 = std::sqrt(env(1, 1) - l10 * l10);

    Rng rng(seed);
    std::vector<Vec> accepted;
    accepted.reserve(size_t(count));
    long long tried = 0;
    const long long cap = 400LL * count;
    while (static_cast<long long>(accepted.size()) < count && tried < cap) {
        ++tried;
        const double z0 = rng.normal(), z1 = rng.normal();
        Vec xp{mu[0] + l00 * z0, mu[1] + l10 * z0 + l11 * z1};
        const double f = safe_density(spec, xp);
        const double g = bound * gdens(xp);
        if (f > g) { // envelope bound was too small: restart, double it
            bound *= 2;
            accepted.clear();
            continue;
        }
        if (rng.uniform() * g <= f) accepted.push_back(xp);
    }
    out.acceptance = tried > 0 ? double(accepted.size()) / double(tried) : 0.0;
    if (static_cast<long long>(accepted.size()) < count)
        throw SamplingError("pushforward: rejection sampling starved");
    if (out.acceptance < 0.01)
        throw SamplingError("pushforward: rejection acceptance below 1%");

    out.pushed.reserve(accepted.size());
    for (const Vec& p : accepted) out.pushed.push_back(differentials(spec, p).gradient);

    const ConvexFunctionSpec dual = legendre(spec);
    const double Rd = density_radius(dual) * 1.42;

    // empirical moments vs dual moments
    const IntegralResult d0 = mass(dual, quad);
    const Vec dmu = barycenter(dual, quad);
    auto dmoment = [&](int a, int b) {
        Integrand ig;
        ig.f = [&, a, b](const Vec& x, const DiffBundle& d) {
            return (x[a] - dmu[a]) * (x[b] - dmu[b]) * std::exp(-d.value);
        };
        return weighted_integral(dual, ig, quad).value / d0.value;
    };
    Vec em = Vec::zero(2);
    for (const Vec& y : out.pushed) em = em + y;
    em = (1.0 / double(count)) * em;
    double ec[3] = {0, 0, 0};
    for (const Vec& y : out.pushed) {
        ec[0] += (y[0] - em[0]) * (y[0] - em[0]);
        ec[1] += (y[0] - em[0]) * (y[1] - em[1]);
        ec[2] += (y[1] - em[1]) * (y[1] - em[1]);
    }
    for (double& v : ec) v /= double(count);
    out.moment_mismatch["mean_0"] = std::abs(em[0] - dmu[0]);
    out.moment_mismatch["mean_1"] = std::abs(em[1] - dmu[1]);
    out.moment_mismatch["cov_00"] = std::abs(ec[0] - dmoment(0, 0));
    out.moment_mismatch["cov_01"] = std::abs(ec[1] - dmoment(0, 1));
    out.moment_mismatch["cov_11"] = std::abs(ec[2] - dmoment(1, 1));

    // sliced KS over 8 directions: the slice CDF integrates the dual
    // density across the orthogonal coordinate with Gauss nodes.
    std::vector<double> gn, gw;
    gauss_legendre(96, gn, gw);
    double worst = 0;
    for (int k = 0; k < 8; ++k) {
        const double th = M_PI * k / 8.0;
        const Vec dir{std::cos(th), std::sin(th)}, perp{-std::sin(th), std::cos(th)};
        const Cdf1D slice = tabulate_cdf(
            [&](double sv) {
                double acc = 0;
                for (size_t j = 0; j < gn.size(); ++j) {
                    const double w = Rd * gn[j];
                    acc += gw[j] * Rd *
                           safe_density(dual, Vec{sv * dir[0] + w * perp[0],
                                                  sv * dir[1] + w * perp[1]});
                }
                return acc;
            },
            -Rd, Rd, 1537);
        std::vector<double> proj(out.pushed.size());
        for (size_t i = 0; i < out.pushed.size(); ++i) proj[i] = dot(out.pushed[i], dir);
        worst = std::max(worst, ks_statistic(proj, slice));
    }
    out.ks = worst;
    out.pass = out.ks <= out.threshold;
    return out;
}

} // namespace

TransportCheck pushforward_check(const ConvexFunctionSpec& spec, int sample_count,
                                 std::uint64_t seed) {
    if (sample_count < 100) throw ParameterError("pushforward_check: too few samples");
    if (spec.dim == 1) return pushforward_1d(spec, sample_count, seed);
    if (spec.dim == 2) return pushforward_2d(spec, sample_count, seed);
    throw ParameterError("pushforward_check: supported in dimensions 1 and 2");
}

MAResidualField ma_residual(const ConvexFunctionSpec& spec, const QuadratureSpec& quad,
                            int sample_count) {
    MAResidualField out;
    const IntegralResult m0 = mass(spec, quad);
    const IntegralResult m1 = affine_surface_area(spec, 1.0, quad);
    out.c_constant = m1.value / m0.value;
    out.mass = m0.value;

    auto residual_at = [&](const Vec& x, const DiffBundle& d) {
        const double expo = -2 * d.value + dot(d.gradient, x);
        return d.hessian_det - out.c_constant * (expo > 700 ? kInf : std::exp(expo));
    };

    out.points = sample_points(spec, sample_count, quad.seed);
    out.residual.reserve(out.points.size());
    double sup = 0;
    for (const Vec& x : out.points) {
        const DiffBundle d = differentials(spec, x);
        const double r = residual_at(x, d);
        out.residual.push_back(r);
        if (d.regular) sup = std::max(sup, std::abs(r));
    }
    out.sup_norm = sup;

    Integrand ig;
    ig.needs_derivatives = true;
    ig.f = [&](const Vec& x, const DiffBundle& d) {
        return std::abs(residual_at(x, d)) * std::exp(-d.value);
    };
    ig.log_envelope = [&](const Vec& x) {
        const DiffBundle d = differentials(spec, x);
        return std::log(std::abs(residual_at(x, d)) * std::exp(-d.value) + 1e-300);
    };
    out.l1_norm = weighted_integral(spec, ig, quad).value;
    out.equality = out.l1_norm <= 1e-5 * out.mass;
    return out;
}

} // namespace lcgeom
