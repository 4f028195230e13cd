#pragma once

#include <cmath>
#include <functional>

// Reference values and integrators that never touch the library quadrature,
// so library results are checked against independent arithmetic.

namespace oracle {

// Frozen 50-digit arithmetic values (rounded to double):
//   kMassCubic        = int e^{-|x|^3/3} dx           = 2 Gamma(1/3) 3^{-2/3}
//   kPolarMassCubic   = int A e^{-(2/3)|y|^{3/2}} dy  = A * 2 Gamma(2/3) (3/2)^{-1/3}
//                       (A = kMassCubic; the polar of the A-normalized cubic)
//   kMassQuartic      = int e^{-x^4/4} dx
//   kEllipsePerimeter = arc length of x^2/4 + y^2 = 1
inline constexpr double kMassCubic = 2.57579863370813817;
inline constexpr double kPolarMassCubic = 6.09398399809234457;
inline constexpr double kMassQuartic = 2.56369335204084757;
inline constexpr double kEllipsePerimeter21 = 9.68844822054767620;
inline constexpr double kSqrt2Pi = 2.50662827463100050;
inline constexpr double kTwoPi = 6.28318530717958648;

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a, double b,
                           double fa, double fm, double fb, double whole, double tol,
                           int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int depth = 40) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

/// Arc length of the ellipse x^2/a^2 + y^2/b^2 = 1.
inline double ellipse_perimeter(double a, double b) {
    return integrate(
        [a, b](double t) {
            const double s = a * std::sin(t), c = b * std::cos(t);
            return std::sqrt(s * s + c * c);
        },
        0.0, 2.0 * M_PI, 1e-13);
}

/// int_{-inf}^{inf} e^{-s|x|^p} dx = (2/p) Gamma(1/p) s^{-1/p}.
inline double exp_power_mass(double p, double s) {
    return 2.0 / p * std::tgamma(1.0 / p) * std::pow(s, -1.0 / p);
}

} // namespace oracle
