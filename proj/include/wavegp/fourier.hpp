#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "wavegp/error.hpp"
#include "wavegp/filter.hpp"
#include "wavegp/wavelet_system.hpp"

namespace wavegp {

using cplx = std::complex<double>;

/// High-pass transfer G(x) = 2^{-1/2} sum_k g_k e^{-ikx}, stored as (e^{-ix} - 1)^order * q(e^{-ix})
/// so that the zero at x = 0 is evaluated without cancellation.
class HighpassTransfer {
public:
    explicit HighpassTransfer(const ScalingFilter& filter) {
        quotient_ = filter.highpass();
        double scale = 0.0;
        for (double g : quotient_) scale += std::abs(g);
        while (quotient_.size() > 1) {
            const std::size_t d = quotient_.size() - 1;
            std::vector<double> q(d);
            q[d - 1] = quotient_[d];
            for (std::size_t i = d - 1; i >= 1; --i) q[i - 1] = quotient_[i] + q[i];
            const double remainder = quotient_[0] + q[0];
            if (std::abs(remainder) > 1e-8 * scale) break;
            quotient_ = std::move(q);
            ++zero_order_;
        }
    }

    int zero_order() const { return zero_order_; }

    cplx operator()(double x) const {
        const cplx z = std::polar(1.0, -x);
        cplx q = 0.0;
        for (std::size_t k = quotient_.size(); k-- > 0;) q = q * z + quotient_[k];
        // e^{-ix} - 1 = -2i sin(x/2) e^{-ix/2}
        const cplx factor = cplx(0.0, -2.0 * std::sin(0.5 * x)) * std::polar(1.0, -0.5 * x);
        cplx power = 1.0;
        for (int i = 0; i < zero_order_; ++i) power *= factor;
        return power * q / std::numbers::sqrt2;
    }

private:
    std::vector<double> quotient_;
    int zero_order_ = 0;
};

/// phi_hat(xi) = prod_{m>=1} m0(xi / 2^m), the Fourier transform of the limit scaling function.
inline cplx phi_hat(const ScalingFilter& filter, double xi) {
    cplx prod = 1.0;
    double x = 0.5 * xi;
    for (int m = 0; m < 200 && std::abs(x) > 1e-18; ++m, x *= 0.5) {
        const cplx z = std::polar(1.0, -x);
        cplx s = 0.0;
        for (std::size_t k = filter.length(); k-- > 0;) s = s * z + filter.coefficients[k];
        prod *= s / std::numbers::sqrt2;
    }
    return prod;
}

/// psi_hat(u) = G(u/2) phi_hat(u/2) with the convention psi_hat(u) = int e^{-iux} psi(x) dx.
class PsiTransform {
public:
    explicit PsiTransform(const ScalingFilter& filter) : filter_(filter), highpass_(filter) {}
    cplx operator()(double u) const { return highpass_(0.5 * u) * phi_hat(filter_, 0.5 * u); }
    int vanishing_moments() const { return highpass_.zero_order(); }

private:
    ScalingFilter filter_;
    HighpassTransfer highpass_;
};

/// Trapezoid quadrature of int e^{-iux} psi(x) dx over the sampled mother wavelet.
inline cplx psi_hat_quadrature(const WaveletSystem& system, double u) {
    const auto& s = system.psi_samples();
    const double h = system.step();
    const double x0 = system.psi_support().lo;
    cplx sum = 0.0;
    const cplx rot = std::polar(1.0, -u * h);
    cplx phase = std::polar(1.0, -u * x0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double w = (i == 0 || i + 1 == s.size()) ? 0.5 : 1.0;
        sum += w * s[i] * phase;
        phase *= rot;
        if (i % 256 == 255) phase = std::polar(1.0, -u * (x0 + h * static_cast<double>(i + 1)));
    }
    return sum * h;
}

/// Power-law majorant amplitude * u^{-exponent} of |psi_hat| fitted over the last decade of the grid.
struct TailFit {
    double amplitude = 0.0;
    double exponent = 0.0;
    double fit_from = 0.0;

    /// Extrapolated tail of int |psi_hat| is finite when the decay beats 1/u.
    bool integrable() const { return amplitude == 0.0 || exponent > 1.05; }

    /// 2 * int_{from}^{inf} weight(u) * amplitude * u^{-exponent} du (both half-lines).
    double tail_integral(double from, const std::function<double(double)>& weight) const {
        if (amplitude == 0.0) return 0.0;
        if (!integrable()) return std::numeric_limits<double>::infinity();
        const double span = 50.0 / (exponent - 1.0);
        const int steps = 20000;
        const double ds = span / steps;
        const double s0 = std::log(from);
        double sum = 0.0;
        for (int i = 0; i <= steps; ++i) {
            const double s = s0 + ds * i;
            const double u = std::exp(s);
            const double f = weight(u) * amplitude * std::exp((1.0 - exponent) * s);
            sum += (i == 0 || i == steps) ? f : (i % 2 ? 4.0 * f : 2.0 * f);
        }
        return 2.0 * sum * ds / 3.0;
    }
};

enum class FourierMethod { Product, Quadrature };

/// psi_hat sampled on the symmetric grid u_i = -u_max + i du.
struct PsiSpectrum {
    double u_max = 0.0;
    double du = 0.0;
    std::vector<cplx> values;
    TailFit tail;

    std::size_t size() const { return values.size(); }
    double frequency(std::size_t i) const { return -u_max + du * static_cast<double>(i); }

    /// Trapezoid of weight(|u|) * |psi_hat(u)| over the grid.
    double integrate_abs(const std::function<double(double)>& weight) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double f = weight(std::abs(frequency(i))) * std::abs(values[i]);
            sum += (i == 0 || i + 1 == values.size()) ? 0.5 * f : f;
        }
        return sum * du;
    }

    static PsiSpectrum zero(double u_max, double du) {
        PsiSpectrum s;
        s.u_max = u_max;
        s.du = du;
        s.values.assign(static_cast<std::size_t>(std::llround(2.0 * u_max / du)) + 1, cplx(0.0));
        return s;
    }
};

inline TailFit fit_tail(const PsiSpectrum& spec) {
    TailFit fit;
    const double top = spec.u_max;
    const double bottom = 0.1 * top;
    fit.fit_from = bottom;
    constexpr int bins = 10;
    std::vector<double> lo(bins), hi(bins), peak(bins, 0.0);
    const double ratio = std::pow(top / bottom, 1.0 / bins);
    for (int b = 0; b < bins; ++b) {
        lo[b] = bottom * std::pow(ratio, b);
        hi[b] = lo[b] * ratio;
    }
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double u = std::abs(spec.frequency(i));
        if (u < bottom || u > top) continue;
        const int b = std::min(bins - 1, static_cast<int>(std::log(u / bottom) / std::log(ratio)));
        peak[b] = std::max(peak[b], std::abs(spec.values[i]));
    }
    // Least-squares slope of log peak against log bin centre.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (int b = 0; b < bins; ++b) {
        if (peak[b] <= 0.0) continue;
        const double x = std::log(std::sqrt(lo[b] * hi[b]));
        const double y = std::log(peak[b]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++count;
    }
    if (count < 2) return fit;  // identically zero transform
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    fit.exponent = -slope;
    for (int b = 0; b < bins; ++b)
        fit.amplitude = std::max(fit.amplitude, peak[b] * std::pow(hi[b], fit.exponent));
    return fit;
}

inline constexpr double default_u_max = 4096.0 * std::numbers::pi;
inline constexpr double default_du = std::numbers::pi / 64.0;

/// Fourier transform of the mother wavelet on [-u_max, u_max] with a fitted tail majorant.
/// The product method evaluates the exact transform of the limit function; the quadrature
/// method integrates the sampled psi by the trapezoid rule.
inline PsiSpectrum fourier_transform_psi(const WaveletSystem& system, double u_max = default_u_max,
                                         double du = default_du, FourierMethod method = FourierMethod::Product) {
    if (!(u_max > 0.0) || !(du > 0.0) || du > u_max)
        throw Error(ErrorKind::InvalidArgument, "frequency grid needs 0 < du <= u_max");
    PsiSpectrum spec = PsiSpectrum::zero(u_max, du);
    const std::size_t n = spec.size();
    const std::size_t mid = n / 2;
    const PsiTransform transform(system.filter());
    for (std::size_t i = mid; i < n; ++i) {
        const double u = spec.frequency(i);
        spec.values[i] = method == FourierMethod::Product ? transform(u) : psi_hat_quadrature(system, u);
        spec.values[n - 1 - i] = std::conj(spec.values[i]);
    }
    spec.tail = fit_tail(spec);
    return spec;
}

}  // namespace wavegp
