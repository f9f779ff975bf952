#pragma once

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace wavegp {

/// Adaptive Gauss-Kronrod on [a, b].
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12) {
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, rel_tol);
}

/// int_0^inf f summed over dyadic pieces [0,1], [1,2], [2,4], ... Stops when the pieces fall
/// below rel_tol of the running total, or when they decay geometrically and the extrapolated
/// remainder does. Returns +inf if neither happens within 2^200.
template <class F>
double integrate_half_line(F&& f, double rel_tol = 1e-12) {
    double total = integrate(f, 0.0, 1.0, rel_tol);
    double a = 1.0;
    double prev = 0.0;
    int quiet = 0;
    int geometric = 0;
    for (int piece = 0; piece < 200; ++piece) {
        const double b = 2.0 * a;
        const double part = integrate(f, a, b, rel_tol);
        total += part;
        quiet = std::abs(part) <= rel_tol * std::abs(total) ? quiet + 1 : 0;
        if (quiet >= 3) return total;
        const double ratio = prev != 0.0 ? std::abs(part / prev) : 1.0;
        geometric = ratio < 0.9 ? geometric + 1 : 0;
        if (geometric >= 4) {
            const double remainder = std::abs(part) * ratio / (1.0 - ratio);
            if (remainder <= rel_tol * std::abs(total)) return total + std::copysign(remainder, part);
        }
        prev = part;
        a = b;
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace wavegp
