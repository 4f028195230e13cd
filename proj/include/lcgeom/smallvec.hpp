#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>

#include "lcgeom/errors.hpp"

// Fixed-capacity vectors and square matrices for dimensions 1..3.
// Everything is by value; no heap traffic in quadrature inner loops.

namespace lcgeom {

constexpr int kMaxDim = 3;

struct Vec {
    int n = 0;
    std::array<double, kMaxDim> v{};

    Vec() = default;
    explicit Vec(int dim) : n(dim) {}
    Vec(std::initializer_list<double> xs) : n(int(xs.size())) {
        int i = 0;
        for (double x : xs) v[i++] = x;
    }
    static Vec zero(int dim) { return Vec(dim); }

    double& operator[](int i) { return v[size_t(i)]; }
    double operator[](int i) const { return v[size_t(i)]; }
};

inline Vec operator+(Vec a, const Vec& b) {
    for (int i = 0; i < a.n; ++i) a.v[i] += b.v[i];
    return a;
}
inline Vec operator-(Vec a, const Vec& b) {
    for (int i = 0; i < a.n; ++i) a.v[i] -= b.v[i];
    return a;
}
inline Vec operator*(double s, Vec a) {
    for (int i = 0; i < a.n; ++i) a.v[i] *= s;
    return a;
}
inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (int i = 0; i < a.n; ++i) s += a.v[i] * b.v[i];
    return s;
}
inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

/// Row-major square matrix, dimension 1..3.
struct Mat {
    int n = 0;
    std::array<double, kMaxDim * kMaxDim> m{};

    Mat() = default;
    explicit Mat(int dim) : n(dim) {}

    double& operator()(int i, int j) { return m[size_t(i * n + j)]; }
    double operator()(int i, int j) const { return m[size_t(i * n + j)]; }

    static Mat identity(int dim) {
        Mat a(dim);
        for (int i = 0; i < dim; ++i) a(i, i) = 1.0;
        return a;
    }
    static Mat diag(const Vec& d) {
        Mat a(d.n);
        for (int i = 0; i < d.n; ++i) a(i, i) = d[i];
        return a;
    }
};

inline Mat operator+(Mat a, const Mat& b) {
    for (int i = 0; i < a.n * a.n; ++i) a.m[i] += b.m[i];
    return a;
}
inline Mat operator*(double s, Mat a) {
    for (int i = 0; i < a.n * a.n; ++i) a.m[i] *= s;
    return a;
}
inline Vec matvec(const Mat& a, const Vec& x) {
    Vec y(a.n);
    for (int i = 0; i < a.n; ++i) {
        double s = 0;
        for (int j = 0; j < a.n; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}
inline Mat matmul(const Mat& a, const Mat& b) {
    Mat c(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) {
            double s = 0;
            for (int k = 0; k < a.n; ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}
inline Mat transpose(const Mat& a) {
    Mat t(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) t(j, i) = a(i, j);
    return t;
}
inline double trace(const Mat& a) {
    double s = 0;
    for (int i = 0; i < a.n; ++i) s += a(i, i);
    return s;
}
inline double quadform(const Mat& a, const Vec& x) { return dot(matvec(a, x), x); }

inline double det(const Mat& a) {
    switch (a.n) {
        case 1: return a(0, 0);
        case 2: return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        case 3:
            return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                 - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                 + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
        default: throw ParameterError("det: dimension must be 1..3");
    }
}

inline Mat inverse(const Mat& a) {
    const double d = det(a);
    if (d == 0.0 || !std::isfinite(d)) throw NumericalError("inverse: singular matrix");
    Mat r(a.n);
    switch (a.n) {
        case 1:
            r(0, 0) = 1.0 / d;
            break;
        case 2:
            r(0, 0) = a(1, 1) / d;
            r(0, 1) = -a(0, 1) / d;
            r(1, 0) = -a(1, 0) / d;
            r(1, 1) = a(0, 0) / d;
            break;
        case 3:
            r(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / d;
            r(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / d;
            r(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / d;
            r(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / d;
            r(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / d;
            r(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / d;
            r(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / d;
            r(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / d;
            r(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / d;
            break;
        default: throw ParameterError("inverse: dimension must be 1..3");
    }
    return r;
}

/// Cholesky log-determinant of a symmetric positive definite matrix.
/// Returns false (leaving logdet untouched) if the matrix is not SPD.
inline bool cholesky_logdet(const Mat& a, double& logdet) {
    Mat l(a.n);
    double acc = 0;
    for (int i = 0; i < a.n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0 || !std::isfinite(s)) return false;
                l(i, i) = std::sqrt(s);
                acc += std::log(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    logdet = acc;
    return true;
}

inline bool is_spd(const Mat& a, double tol = 0.0) {
    for (int i = 0; i < a.n; ++i)
        for (int j = i + 1; j < a.n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > tol * (1.0 + std::abs(a(i, j))) + 1e-14)
                return false;
    double ld;
    return cholesky_logdet(a, ld);
}

} // namespace lcgeom
