#include "oml/cubic.hpp"

#include <algorithm>
#include <cmath>

namespace oml {

namespace {

int solve_quadratic(double a, double b, double c,
                    std::array<double, 3>& roots, std::array<int, 3>& mults) {
    if (a == 0.0) {
        if (b == 0.0) return 0;
        roots[0] = -c / b;
        mults[0] = 1;
        return 1;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return 0;
    if (disc == 0.0) {
        roots[0] = -b / (2.0 * a);
        mults[0] = 2;
        return 1;
    }
    // Numerically stable pair: avoid cancellation in the small root.
    const double s = std::sqrt(disc);
    const double q = -0.5 * (b + std::copysign(s, b));
    double r0 = q / a;
    double r1 = c / q;
    if (r0 > r1) std::swap(r0, r1);
    roots[0] = r0;
    roots[1] = r1;
    mults[0] = mults[1] = 1;
    return 2;
}

} // namespace

int solve_cubic_real(double a, double b, double c, double d,
                     std::array<double, 3>& roots, std::array<int, 3>& mults) {
    if (a == 0.0) return solve_quadratic(b, c, d, roots, mults);

    // Normalize to x^3 + p2 x^2 + p1 x + p0, then depress with x = t - p2/3.
    const double p2 = b / a;
    const double p1 = c / a;
    const double p0 = d / a;
    const double shift = p2 / 3.0;
    const double p = p1 - p2 * p2 / 3.0;
    const double q = 2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0;

    const double half_q = 0.5 * q;
    const double third_p = p / 3.0;
    const double disc = half_q * half_q + third_p * third_p * third_p;

    // Scale-aware tolerance for the triple/double root boundaries.
    const double scale = std::max({std::abs(half_q * half_q),
                                   std::abs(third_p * third_p * third_p), 1e-300});
    const double tol = 1e-14 * scale;

    if (disc > tol) {
        // One real root (Cardano).
        const double s = std::sqrt(disc);
        const double u = std::cbrt(-half_q + s);
        const double v = std::cbrt(-half_q - s);
        roots[0] = u + v - shift;
        mults[0] = 1;
        return 1;
    }
    if (disc >= -tol) {
        if (std::abs(p) < 1e-14 * std::max(1.0, std::abs(shift * shift))) {
            // Triple root.
            roots[0] = -shift;
            mults[0] = 3;
            return 1;
        }
        // Double root plus a simple one.
        const double u = std::cbrt(-half_q);
        double r_double = -u - shift;
        double r_simple = 2.0 * u - shift;
        if (r_simple < r_double) {
            roots[0] = r_simple;
            roots[1] = r_double;
            mults[0] = 1;
            mults[1] = 2;
        } else {
            roots[0] = r_double;
            roots[1] = r_simple;
            mults[0] = 2;
            mults[1] = 1;
        }
        return 2;
    }

    // Three distinct real roots (trigonometric form).
    const double m = 2.0 * std::sqrt(-third_p);
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg);
    for (int k = 0; k < 3; ++k) {
        roots[k] = m * std::cos((theta - 2.0 * M_PI * k) / 3.0) - shift;
        mults[k] = 1;
    }
    std::sort(roots.begin(), roots.end());
    return 3;
}

} // namespace oml
