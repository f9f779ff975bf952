#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Eigenvalues>

#include "wavegp/error.hpp"

namespace wavegp {

enum class Family { Haar, Daubechies, Symmlet, Coiflet };

inline std::string_view to_string(Family f) {
    switch (f) {
    case Family::Haar: return "haar";
    case Family::Daubechies: return "daubechies";
    case Family::Symmlet: return "symmlet";
    case Family::Coiflet: return "coiflet";
    }
    return "unknown";
}

inline Family parse_family(std::string_view name) {
    if (name == "haar") return Family::Haar;
    if (name == "daubechies" || name == "db") return Family::Daubechies;
    if (name == "symmlet" || name == "sym") return Family::Symmlet;
    if (name == "coiflet" || name == "coif") return Family::Coiflet;
    throw Error(ErrorKind::UnsupportedFamily, "unknown wavelet family '" + std::string(name) + "'");
}

/// Low-pass filter h_k of an orthonormal compactly supported scaling function,
/// normalised so that sum h_k = sqrt(2).
struct ScalingFilter {
    Family family = Family::Haar;
    int order = 1;  ///< vanishing moments
    std::vector<double> coefficients;

    std::size_t length() const { return coefficients.size(); }

    /// m0(x) = 2^{-1/2} sum_k h_k e^{-ikx}; m0(0) = 1.
    std::complex<double> transfer(double x) const {
        std::complex<double> sum = 0.0;
        for (std::size_t k = 0; k < coefficients.size(); ++k)
            sum += coefficients[k] * std::polar(1.0, -static_cast<double>(k) * x);
        return sum / std::numbers::sqrt2;
    }

    /// Quadrature-mirror high-pass filter g_k = (-1)^k h_{L-1-k}.
    std::vector<double> highpass() const {
        const std::size_t n = coefficients.size();
        std::vector<double> g(n);
        for (std::size_t k = 0; k < n; ++k)
            g[k] = ((k % 2 == 0) ? 1.0 : -1.0) * coefficients[n - 1 - k];
        return g;
    }

    /// Largest deviation from sum h = sqrt(2) and sum_k h_k h_{k+2m} = delta_{m0}.
    double orthonormality_defect() const {
        double defect = 0.0;
        double total = 0.0;
        for (double h : coefficients) total += h;
        defect = std::abs(total - std::numbers::sqrt2);
        const auto n = static_cast<std::ptrdiff_t>(coefficients.size());
        for (std::ptrdiff_t m = 0; 2 * m < n; ++m) {
            double s = 0.0;
            for (std::ptrdiff_t k = 0; k + 2 * m < n; ++k) s += coefficients[k] * coefficients[k + 2 * m];
            defect = std::max(defect, std::abs(s - (m == 0 ? 1.0 : 0.0)));
        }
        return defect;
    }
};

namespace detail {

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Roots of sum_k c_k y^k (ascending coefficients) via the companion matrix,
// polished by Newton steps in extended precision.
inline std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& c) {
    const int degree = static_cast<int>(c.size()) - 1;
    if (degree < 1) return {};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -c[i] / c[degree];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    std::vector<std::complex<double>> roots;
    for (int i = 0; i < degree; ++i) {
        std::complex<long double> y(solver.eigenvalues()[i].real(), solver.eigenvalues()[i].imag());
        for (int iter = 0; iter < 8; ++iter) {
            std::complex<long double> p = 0, dp = 0;
            for (int k = degree; k >= 0; --k) {
                dp = dp * y + p;
                p = p * y + static_cast<long double>(c[k]);
            }
            if (std::abs(dp) == 0.0L) break;
            y -= p / dp;
        }
        roots.emplace_back(static_cast<double>(y.real()), static_cast<double>(y.imag()));
    }
    return roots;
}

// Extremal-phase Daubechies filter with `n` vanishing moments by spectral factorisation
// of |m0|^2 = cos^{2n}(x/2) P(sin^2(x/2)).
inline std::vector<double> daubechies_coefficients(int n) {
    using cplx = std::complex<long double>;
    std::vector<double> p(n);
    for (int k = 0; k < n; ++k) p[k] = binomial(n - 1 + k, k);

    std::vector<cplx> poly{cplx(1.0L)};
    auto multiply_linear = [&poly](cplx root) {  // poly *= (z - root)
        std::vector<cplx> next(poly.size() + 1, cplx(0.0L));
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= root * poly[i];
        }
        poly = std::move(next);
    };
    for (int i = 0; i < n; ++i) multiply_linear(cplx(-1.0L));
    for (auto y : polynomial_roots(p)) {
        // sin^2(x/2) = (2 - z - 1/z)/4  =>  z^2 - 2(1 - 2y) z + 1 = 0; keep the root outside the unit circle.
        const cplx w = 1.0L - 2.0L * cplx(y.real(), y.imag());
        const cplx s = std::sqrt(w * w - 1.0L);
        const cplx z = std::abs(w + s) >= 1.0L ? w + s : w - s;
        multiply_linear(z);
    }
    long double total = 0.0L;
    for (const auto& c : poly) total += c.real();
    std::vector<double> h(poly.size());
    for (std::size_t k = 0; k < poly.size(); ++k)
        h[k] = static_cast<double>(poly[k].real() / total * std::numbers::sqrt2_v<long double>);
    return h;
}

}  // namespace detail

/// Scaling filter for a supported (family, order) pair. Haar takes order 1;
/// Daubechies takes 1..10 vanishing moments (order 1 coincides with Haar).
inline ScalingFilter build_filter(Family family, int order) {
    ScalingFilter f;
    f.family = family;
    f.order = order;
    switch (family) {
    case Family::Haar:
        if (order != 1) throw Error(ErrorKind::UnsupportedFamily, "Haar has exactly one vanishing moment");
        f.coefficients = {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
        return f;
    case Family::Daubechies:
        if (order < 1 || order > 10)
            throw Error(ErrorKind::UnsupportedFamily,
                        "Daubechies order " + std::to_string(order) + " outside 1..10");
        f.coefficients = order == 1 ? std::vector<double>{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2}
                                    : detail::daubechies_coefficients(order);
        return f;
    case Family::Symmlet:
    case Family::Coiflet:
        break;
    }
    throw Error(ErrorKind::UnsupportedFamily, std::string(to_string(family)) + " filters are not implemented");
}

}  // namespace wavegp
