#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "wavegp/error.hpp"
#include "wavegp/filter.hpp"
#include "wavegp/grid.hpp"

namespace wavegp {

enum class WaveletKind { Father, Mother };
enum class EnvelopeMode { Flat, Radial };

inline std::string_view to_string(EnvelopeMode m) { return m == EnvelopeMode::Flat ? "flat" : "radial"; }
inline EnvelopeMode parse_envelope_mode(std::string_view s) {
    if (s == "flat") return EnvelopeMode::Flat;
    if (s == "radial") return EnvelopeMode::Radial;
    throw Error(ErrorKind::InvalidArgument, "envelope mode must be flat or radial");
}

/// Nonincreasing step function of |x| vanishing beyond `radius`. On [i*step, (i+1)*step)
/// it takes values[i].
struct Envelope {
    double step = 1.0;
    double radius = 0.0;
    std::vector<double> values;

    double operator()(double x) const {
        x = std::abs(x);
        if (x > radius || values.empty()) return 0.0;
        const auto i = std::min(static_cast<std::size_t>(x / step), values.size() - 1);
        return values[i];
    }

    double at_zero() const { return values.empty() ? 0.0 : values.front(); }

    /// Exact integral of value^power over [a, b] within [0, radius].
    double integral_of_power(double a, double b, double power) const {
        a = std::max(a, 0.0);
        b = std::min(b, radius);
        double sum = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double lo = std::max(a, step * static_cast<double>(i));
            const double hi = std::min(b, i + 1 == values.size() ? radius : step * static_cast<double>(i + 1));
            if (hi > lo && values[i] > 0.0) sum += (hi - lo) * std::pow(values[i], power);
        }
        return sum;
    }
};

struct CascadeOptions {
    double tolerance = 1e-10;
    int max_iterations = 60;
};

/// Father and mother wavelets sampled at spacing 2^{-depth} on their supports.
class WaveletSystem {
public:
    const ScalingFilter& filter() const { return filter_; }
    int depth() const { return depth_; }
    double step() const { return std::ldexp(1.0, -depth_); }
    const std::vector<double>& phi_samples() const { return phi_; }
    const std::vector<double>& psi_samples() const { return psi_; }
    Interval phi_support() const { return phi_support_; }
    Interval psi_support() const { return psi_support_; }
    int cascade_iterations() const { return iterations_; }

    /// Smallest half-width â with psi_support - psi_shift() inside [-â, â].
    double a_hat() const { return a_hat_; }
    /// Integer translation that centres psi_support inside [-â, â].
    double psi_shift() const { return psi_shift_; }

    /// Raw sample lookup with linear interpolation; exactly zero off the support.
    double evaluate(WaveletKind kind, double x) const {
        const auto& s = kind == WaveletKind::Father ? phi_ : psi_;
        const Interval sup = kind == WaveletKind::Father ? phi_support_ : psi_support_;
        if (x < sup.lo || x > sup.hi) return 0.0;
        const double pos = std::ldexp(x - sup.lo, depth_);
        const auto i = static_cast<std::size_t>(pos);
        if (i + 1 >= s.size()) return s.back();
        // A two-tap filter gives step functions on dyadic cells, which the samples represent exactly.
        if (filter_.length() == 2) return s[i];
        const double frac = pos - static_cast<double>(i);
        return frac == 0.0 ? s[i] : s[i] + frac * (s[i + 1] - s[i]);
    }

    /// 2^{j/2} w(2^j x - k) for w = phi or psi.
    double evaluate_dilated(WaveletKind kind, int j, long k, double x) const {
        return std::exp2(0.5 * j) * evaluate(kind, std::ldexp(x, j) - static_cast<double>(k));
    }

    /// Support of w_{jk} = 2^{j/2} w(2^j x - k).
    Interval dilated_support(WaveletKind kind, int j, long k) const {
        const Interval s = kind == WaveletKind::Father ? phi_support_ : psi_support_;
        return {std::ldexp(s.lo + static_cast<double>(k), -j), std::ldexp(s.hi + static_cast<double>(k), -j)};
    }

    /// Majorant of |psi| as a function of |x - psi_shift()|.
    Envelope envelope(EnvelopeMode mode) const { return make_envelope(psi_, psi_support_, psi_shift_, a_hat_, mode); }

    /// Flat majorant of |phi| around its own centre.
    Envelope phi_envelope() const {
        const double shift = std::floor(0.5 * (phi_support_.lo + phi_support_.hi));
        const double half = std::max(shift - phi_support_.lo, phi_support_.hi - shift);
        return make_envelope(phi_, phi_support_, shift, half, EnvelopeMode::Flat);
    }

    nlohmann::json to_json() const {
        return {{"family", to_string(filter_.family)},
                {"order", filter_.order},
                {"depth", depth_},
                {"filter", filter_.coefficients},
                {"phi_support", {phi_support_.lo, phi_support_.hi}},
                {"psi_support", {psi_support_.lo, psi_support_.hi}},
                {"a_hat", a_hat_},
                {"phi_samples", phi_},
                {"psi_samples", psi_}};
    }

    static WaveletSystem from_json(const nlohmann::json& j) {
        WaveletSystem w;
        w.filter_.family = parse_family(j.at("family").get<std::string>());
        w.filter_.order = j.at("order").get<int>();
        w.filter_.coefficients = j.at("filter").get<std::vector<double>>();
        w.depth_ = j.at("depth").get<int>();
        w.phi_ = j.at("phi_samples").get<std::vector<double>>();
        w.psi_ = j.at("psi_samples").get<std::vector<double>>();
        const auto ps = j.at("phi_support").get<std::vector<double>>();
        const auto qs = j.at("psi_support").get<std::vector<double>>();
        w.phi_support_ = {ps.at(0), ps.at(1)};
        w.psi_support_ = {qs.at(0), qs.at(1)};
        w.finish();
        return w;
    }

    friend WaveletSystem cascade_evaluate(const ScalingFilter&, int, const CascadeOptions&);

private:
    void finish() {
        // â and the centring shift: minimise max(c - lo, hi - c) over integers c.
        const double mid = 0.5 * (psi_support_.lo + psi_support_.hi);
        a_hat_ = std::numeric_limits<double>::infinity();
        for (double c : {std::floor(mid), std::ceil(mid)}) {
            const double half = std::max(c - psi_support_.lo, psi_support_.hi - c);
            if (half < a_hat_) {
                a_hat_ = half;
                psi_shift_ = c;
            }
        }
    }

    Envelope make_envelope(const std::vector<double>& s, Interval support, double shift, double radius,
                           EnvelopeMode mode) const {
        Envelope env;
        env.step = step();
        env.radius = radius;
        const auto cells = static_cast<std::size_t>(std::llround(std::ldexp(radius, depth_))) + 1;
        double peak = 0.0;
        for (double v : s) peak = std::max(peak, std::abs(v));
        if (mode == EnvelopeMode::Flat) {
            env.values.assign(cells, peak);
            return env;
        }
        // Radial: values[i] = max |w(t)| over |t - shift| >= i * step.
        std::vector<double> by_distance(cells + 1, 0.0);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double t = support.lo + std::ldexp(static_cast<double>(i), -depth_) - shift;
            const auto d = std::min(static_cast<std::size_t>(std::llround(std::ldexp(std::abs(t), depth_))), cells);
            by_distance[d] = std::max(by_distance[d], std::abs(s[i]));
        }
        env.values.assign(cells, 0.0);
        double running = by_distance[cells];
        for (std::size_t i = cells; i-- > 0;) {
            running = std::max(running, by_distance[i]);
            env.values[i] = running;
        }
        return env;
    }

    ScalingFilter filter_;
    int depth_ = 0;
    int iterations_ = 0;
    std::vector<double> phi_;
    std::vector<double> psi_;
    Interval phi_support_;
    Interval psi_support_;
    double a_hat_ = 0.0;
    double psi_shift_ = 0.0;
};

/// Cascade algorithm: phi at the integers from the eigenvector of the refinement matrix,
/// then the two-scale relation iterated on the fixed dyadic grid until successive iterates
/// agree to `options.tolerance`. psi(x) = sqrt(2) sum_k g_k phi(2x - k).
inline WaveletSystem cascade_evaluate(const ScalingFilter& filter, int depth, const CascadeOptions& options = {}) {
    if (depth < 4 || depth > 24) throw Error(ErrorKind::InvalidArgument, "cascade depth must be in 4..24");
    const auto len = static_cast<long>(filter.length());
    if (len < 2 || len % 2 != 0) throw Error(ErrorKind::InvalidArgument, "filter length must be even and >= 2");
    const auto& h = filter.coefficients;
    const long width = len - 1;
    const long scale = 1L << depth;
    const auto n = static_cast<std::size_t>(width * scale + 1);
    // sqrt2 up to rounding, but makes the two-scale weights sum to exactly 2 (Haar weights exactly 1).
    double hsum = 0.0;
    for (double v : h) hsum += v;
    const double norm = 2.0 / hsum;

    // (M - I) v = 0 with M_ij = sqrt2 h_{2i-j}, plus phi(L-1) = 0 and sum v = 1.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(len + 2, len);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(len + 2);
    for (long i = 0; i < len; ++i) {
        for (long j = 0; j < len; ++j) {
            const long idx = 2 * i - j;
            if (idx >= 0 && idx < len) a(i, j) = norm * h[idx];
        }
        a(i, i) -= 1.0;
    }
    a(len, len - 1) = 1.0;
    a.row(len + 1).setOnes();
    rhs(len + 1) = 1.0;
    Eigen::VectorXd integer_values = a.colPivHouseholderQr().solve(rhs);
    integer_values(len - 1) = 0.0;
    integer_values /= integer_values.sum();

    std::vector<double> cur(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto cell = static_cast<long>(i) / scale;
        const double frac = static_cast<double>(static_cast<long>(i) % scale) / static_cast<double>(scale);
        const double left = integer_values(cell);
        const double right = cell + 1 < len ? integer_values(cell + 1) : 0.0;
        cur[i] = left + frac * (right - left);
    }

    std::vector<double> next(n);
    int iter = 0;
    for (;;) {
        if (iter >= options.max_iterations)
            throw Error(ErrorKind::NonConvergence, "cascade did not converge in " +
                                                       std::to_string(options.max_iterations) + " iterations");
        ++iter;
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            for (long k = 0; k < len; ++k) {
                const long idx = 2 * static_cast<long>(i) - k * scale;
                if (idx >= 0 && idx < static_cast<long>(n)) v += h[k] * cur[idx];
            }
            next[i] = norm * v;
            diff = std::max(diff, std::abs(next[i] - cur[i]));
        }
        std::swap(cur, next);
        if (diff <= options.tolerance) break;
    }

    const auto g = filter.highpass();
    std::vector<double> psi(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        for (long k = 0; k < len; ++k) {
            const long idx = 2 * static_cast<long>(i) - k * scale;
            if (idx >= 0 && idx < static_cast<long>(n)) v += g[k] * cur[idx];
        }
        psi[i] = norm * v;
    }

    WaveletSystem w;
    w.filter_ = filter;
    w.depth_ = depth;
    w.iterations_ = iter;
    w.phi_ = std::move(cur);
    w.psi_ = std::move(psi);
    w.phi_support_ = {0.0, static_cast<double>(width)};
    w.psi_support_ = {0.0, static_cast<double>(width)};
    w.finish();
    return w;
}

}  // namespace wavegp
