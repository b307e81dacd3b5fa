#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library, so each one is an independent route to the value it checks.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double whole,
                                   double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = simpson(f, a, mid);
    const double right = simpson(f, mid, b);
    const double diff = left + right - whole;
    // The second bound stops refinement once the difference is pure roundoff.
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol || std::abs(diff) <= 1e-14 * std::abs(left + right))
        return left + right + diff / 15.0;
    return adaptive_simpson_rec(f, a, mid, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, mid, b, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                               int max_depth = 30) {
    if (a == b) return 0.0;
    return adaptive_simpson_rec(f, a, b, simpson(f, a, b), tol, max_depth);
}

inline double cubic(double a, double b, double c, double x) { return a * x * x * x + b * x * x + c * x; }

inline double normal_curve(double x, double xi, double sigma, double amp) {
    return amp / (std::sqrt(2.0 * std::numbers::pi) * sigma) * std::exp(-(x - xi) * (x - xi) / (2.0 * sigma * sigma));
}

inline double dl_resource(double z0, double decay, double u) { return z0 * (1.0 - std::exp(-decay * u)); }

}  // namespace oracle
