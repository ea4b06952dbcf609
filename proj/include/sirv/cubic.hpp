#pragma once

#include <algorithm>
#include <cmath>

namespace sirv {

namespace detail {

inline double eval_cubic(double a, double b, double c, double x) {
    return ((x + a) * x + b) * x + c;
}

// Largest real root by closed form (Cardano / trigonometric), no clamping.
inline double largest_real_root(double a, double b, double c) {
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double shift = -a / 3.0;
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        return std::cbrt(-0.5 * q + s) + std::cbrt(-0.5 * q - s) + shift;
    }
    if (p == 0.0) return shift; // triple root
    const double r = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * r);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg);
    return r * std::cos(theta / 3.0) + shift;
}

} // namespace detail

/// Largest real root of x^3 + a x^2 + b x + c, clamped below at zero.
/// Total over all real coefficients. The closed-form root is polished by
/// safeguarded Newton/bisection down to machine resolution in x.
inline double root_plus(double a, double b, double c) {
    double x = detail::largest_real_root(a, b, c);

    // Newton polish
    for (int it = 0; it < 4; ++it) {
        const double f = detail::eval_cubic(a, b, c, x);
        const double df = (3.0 * x + 2.0 * a) * x + b;
        if (df == 0.0) break;
        const double step = f / df;
        x -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }

    // Bisection tightening when a sign change brackets the root. The largest
    // root of a monic cubic has p <= 0 on its left and p >= 0 on its right
    // unless it has even multiplicity, in which case Newton already did its
    // best and no bracket exists.
    double delta = std::max(1e-12, 1e-12 * std::abs(x));
    double lo = x - delta, hi = x + delta;
    for (int it = 0; it < 60 && detail::eval_cubic(a, b, c, hi) < 0.0; ++it) {
        delta *= 4.0;
        hi = x + delta;
    }
    for (int it = 0; it < 60 && detail::eval_cubic(a, b, c, lo) > 0.0; ++it) {
        delta *= 4.0;
        lo = x - delta;
    }
    if (detail::eval_cubic(a, b, c, lo) <= 0.0 && detail::eval_cubic(a, b, c, hi) >= 0.0) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (detail::eval_cubic(a, b, c, mid) < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        x = 0.5 * (lo + hi);
    }
    return x > 0.0 ? x : 0.0;
}

} // namespace sirv
