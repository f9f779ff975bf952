#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavegp/covariance.hpp"
#include "wavegp/error.hpp"
#include "wavegp/expansion.hpp"
#include "wavegp/fourier.hpp"
#include "wavegp/quadrature.hpp"
#include "wavegp/wavelet_system.hpp"

namespace wavegp {

struct BoundParams {
    double alpha = 1.0;
    double gamma = 0.1;
    double kappa = 1.0;

    double beta() const { return alpha * (1.0 - gamma); }

    void validate() const {
        if (!(alpha > 0.5)) throw Error(ErrorKind::InvalidArgument, "alpha must exceed 1/2");
        if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorKind::InvalidArgument, "gamma must lie in (0, 1)");
        if (!(beta() > 0.5)) throw Error(ErrorKind::InvalidArgument, "beta = alpha (1 - gamma) must exceed 1/2");
        if (!(kappa > 0.0 && kappa <= 1.0)) throw Error(ErrorKind::InvalidArgument, "kappa must lie in (0, 1]");
    }
};

enum class ExponentVariant { Half, Literal };
enum class CjSource { Empirical, SpectralBound };
enum class CjMethod { Time, Spectral };

inline std::string_view to_string(ExponentVariant v) { return v == ExponentVariant::Half ? "half" : "literal"; }
inline std::string_view to_string(CjSource s) { return s == CjSource::Empirical ? "empirical" : "spectral_bound"; }
inline std::string_view to_string(CjMethod m) { return m == CjMethod::Time ? "time" : "spectral"; }

inline ExponentVariant parse_variant(std::string_view s) {
    if (s == "half") return ExponentVariant::Half;
    if (s == "literal") return ExponentVariant::Literal;
    throw Error(ErrorKind::InvalidArgument, "unknown exponent variant '" + std::string(s) + "'");
}
inline CjSource parse_cj_source(std::string_view s) {
    if (s == "empirical") return CjSource::Empirical;
    if (s == "spectral_bound") return CjSource::SpectralBound;
    throw Error(ErrorKind::InvalidArgument, "unknown c_j source '" + std::string(s) + "'");
}
inline CjMethod parse_cj_method(std::string_view s) {
    if (s == "time") return CjMethod::Time;
    if (s == "spectral") return CjMethod::Spectral;
    throw Error(ErrorKind::InvalidArgument, "unknown c_j method '" + std::string(s) + "'");
}

/// Upper bound of sup_x sum_k |psi(x - k)|^gamma from the envelope:
/// 3 Phi^gamma(0) + 4 int_{1/2}^{a_hat} Phi^gamma, the integral taken exactly on the step function.
inline double compute_L_gamma(const Envelope& envelope, double a_hat, double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw Error(ErrorKind::InvalidArgument, "gamma must lie in (0, 1]");
    const double head = 3.0 * std::pow(envelope.at_zero(), gamma);
    if (a_hat < 0.5) return head;
    return head + 4.0 * envelope.integral_of_power(0.5, a_hat, gamma);
}

/// Truncated frequency integral plus its tail majorant beyond u_max.
struct SpectralIntegral {
    double truncated = 0.0;
    double tail = 0.0;
    double total() const { return truncated + tail; }
};

/// (1/pi) int ln^alpha(e^alpha + |u| + 2) |psi_hat(u)| du. value() includes the tail majorant.
struct RAlpha : SpectralIntegral {
    double value() const { return total(); }
};

inline RAlpha compute_R_alpha(const PsiSpectrum& spec, double alpha, double max_tail_fraction = 0.01) {
    const double ea = std::exp(alpha);
    auto weight = [&](double u) { return std::pow(std::log(ea + u + 2.0), alpha); };
    RAlpha r;
    r.truncated = spec.integrate_abs(weight) / std::numbers::pi;
    r.tail = spec.tail.tail_integral(spec.u_max, weight) / std::numbers::pi;
    if (r.tail > max_tail_fraction * r.truncated)
        throw Error(ErrorKind::TruncationTooSmall,
                    "R_alpha tail majorant " + format_double(r.tail) + " exceeds " +
                        format_double(100.0 * max_tail_fraction) + "% of truncated value " +
                        format_double(r.truncated) + " at u_max = " + format_double(spec.u_max));
    return r;
}

struct ConditionI : SpectralIntegral {
    bool holds_numerically = false;
    double tail_exponent = 0.0;
};

/// int ln^alpha(1 + |u|) |psi_hat(u)| du with a power-law tail majorant; holds when the
/// majorant's tail integral converges.
inline ConditionI check_condition_i(const PsiSpectrum& spec, double alpha) {
    auto weight = [&](double u) { return std::pow(std::log1p(u), alpha); };
    ConditionI c;
    c.truncated = spec.integrate_abs(weight);
    c.tail_exponent = spec.tail.exponent;
    c.holds_numerically = spec.tail.integrable();
    c.tail = spec.tail.tail_integral(spec.u_max, weight);
    return c;
}

/// E eta_{jk} eta_{jl} for a stationary model with lag m = k - l:
/// (1/pi) int_0^inf R_hat(z) 2^{-j} |psi_hat(z / 2^j)|^2 cos(m z / 2^j) dz.
inline double coefficient_covariance_spectral(const CovarianceModel& model, const PsiTransform& transform, int j,
                                              long lag = 0) {
    if (!model.has_spectral_density())
        throw Error(ErrorKind::SpectralUnavailable, model.name() + " has no spectral density");
    const double scale = std::ldexp(1.0, -j);
    auto f = [&](double z) {
        const double w = z * scale;
        return model.spectral_density(z) * scale * std::norm(transform(w)) * std::cos(static_cast<double>(lag) * w);
    };
    return integrate_half_line(f, 1e-12) / std::numbers::pi;
}

/// Double trapezoid of R(u - v) psi_jk(u) psi_jl(v) for a stationary model, lag m = k - l,
/// on the sampled mother wavelet taken every `stride` samples.
inline double coefficient_covariance_time(const CovarianceModel& model, const WaveletSystem& system, int j,
                                          long lag = 0, std::size_t stride = 1) {
    const auto& s = system.psi_samples();
    const std::size_t n = (s.size() - 1) / stride + 1;
    const double h = system.step() * static_cast<double>(stride);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = s[i * stride] * h * ((i == 0 || i + 1 == n) ? 0.5 : 1.0);
    const double scale = std::ldexp(1.0, -j);
    // r[d + n - 1] = R((d h + m) / 2^j), d = i - i'.
    std::vector<double> r(2 * n - 1);
    for (std::size_t d = 0; d < r.size(); ++d) {
        const double delta = (static_cast<double>(d) - static_cast<double>(n - 1)) * h + static_cast<double>(lag);
        r[d] = model(delta * scale, 0.0);
    }
    long double total = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] == 0.0) continue;
        const double* row = r.data() + i + n - 1;
        double inner = 0.0;
        for (std::size_t k = 0; k < n; ++k) inner += w[k] * row[-static_cast<std::ptrdiff_t>(k)];
        total += static_cast<long double>(w[i]) * inner;
    }
    return static_cast<double>(total) * scale;
}

/// E eta_{jk} eta_{jl} for any covariance kernel, by double trapezoid on the sampled wavelet.
inline double coefficient_covariance_kernel(const CovarianceModel& model, const WaveletSystem& system, int j,
                                            long k, long l, std::size_t stride = 1) {
    const auto& s = system.psi_samples();
    const std::size_t n = (s.size() - 1) / stride + 1;
    const double h = system.step() * static_cast<double>(stride);
    const double lo = system.psi_support().lo;
    const double scale = std::ldexp(1.0, -j);
    std::vector<double> w(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = s[i * stride] * h * ((i == 0 || i + 1 == n) ? 0.5 : 1.0);
        x[i] = lo + h * static_cast<double>(i);
    }
    long double total = 0.0L;
    for (std::size_t a = 0; a < n; ++a) {
        if (w[a] == 0.0) continue;
        const double u = (x[a] + static_cast<double>(k)) * scale;
        double inner = 0.0;
        for (std::size_t b = 0; b < n; ++b) inner += w[b] * model(u, (x[b] + static_cast<double>(l)) * scale);
        total += static_cast<long double>(w[a]) * inner;
    }
    return static_cast<double>(total) * scale;
}

struct CjOptions {
    /// Sample stride of the time-domain double quadrature; 0 picks 1 for stationary models
    /// and a stride leaving at most 1024 samples otherwise.
    std::size_t stride = 0;
};

/// c_j = max over k, l in K_j of |E eta_jk eta_jl|. By Cauchy-Schwarz the maximum is attained on
/// the diagonal, so c_j = max_k Var(eta_jk); for stationary models every k gives the same value.
inline double estimate_cj(const CovarianceModel& model, const WaveletSystem& system, int j, Interval domain,
                          CjMethod method, const CjOptions& options = {}) {
    if (method == CjMethod::Spectral) {
        if (!model.is_stationary() || !model.has_spectral_density())
            throw Error(ErrorKind::SpectralUnavailable, model.name() + " has no spectral density");
        return std::abs(coefficient_covariance_spectral(model, PsiTransform(system.filter()), j));
    }
    if (model.is_stationary())
        return std::abs(coefficient_covariance_time(model, system, j, 0, options.stride ? options.stride : 1));
    std::size_t stride = options.stride;
    if (stride == 0) {
        stride = 1;
        while ((system.psi_samples().size() - 1) / stride + 1 > 1024) stride *= 2;
    }
    const auto [k0, k1] = translation_range(system, WaveletKind::Mother, j, domain);
    double c = 0.0;
    for (long k = k0; k <= k1; ++k) c = std::max(c, std::abs(coefficient_covariance_kernel(model, system, j, k, k, stride)));
    return c;
}

/// a_hat^2 Phi_psi(0) / 2, an order-1 Lipschitz constant of psi_hat.
inline double lipschitz_constant_psi(double a_hat, double envelope_at_zero) {
    return 0.5 * a_hat * a_hat * envelope_at_zero;
}

inline double lipschitz_constant_psi(const WaveletSystem& system) {
    return lipschitz_constant_psi(system.a_hat(), system.envelope(EnvelopeMode::Flat).at_zero());
}

/// Constant C with |psi_hat(u)| <= C |u|^kappa: interpolates the order-1 constant and
/// sup |psi_hat| <= 2 a_hat Phi_psi(0) as C_1^kappa M^{1-kappa}.
inline double lipschitz_constant_psi(const WaveletSystem& system, double kappa) {
    const double phi0 = system.envelope(EnvelopeMode::Flat).at_zero();
    const double c1 = lipschitz_constant_psi(system.a_hat(), phi0);
    return std::pow(c1, kappa) * std::pow(2.0 * system.a_hat() * phi0, 1.0 - kappa);
}

/// (a_hat Phi_psi(0) / (pi 2^{j(1+kappa)})) * lipschitz * int |R_hat(z)| |z|^kappa dz.
/// With lipschitz = 1 this is the closed form as usually stated; passing the Lipschitz constant
/// of psi_hat of order kappa gives a certified majorant of |E eta_jk eta_jl|.
inline double example1_cj_bound(const CovarianceModel& model, const WaveletSystem& system, double kappa, int j,
                                double lipschitz = 1.0) {
    const double moment = model.kappa_moment(kappa);
    const double phi0 = system.envelope(EnvelopeMode::Flat).at_zero();
    return system.a_hat() * phi0 * lipschitz * moment / (std::numbers::pi * std::exp2(j * (1.0 + kappa)));
}

/// Sum of nonnegative terms t_0..t_J plus a geometric majorant of t_{J+1}, t_{J+2}, ...
/// fitted from the last three terms.
struct SeriesSum {
    double truncated = 0.0;
    double tail = 0.0;
    double ratio = 0.0;
    bool converged = true;
    double total() const { return truncated + tail; }
};

inline SeriesSum geometric_tail(const std::vector<double>& terms) {
    SeriesSum s;
    const std::size_t n = terms.size();
    if (n < 3) throw Error(ErrorKind::InvalidArgument, "need at least three terms for a tail majorant");
    const double a = terms[n - 3], b = terms[n - 2], c = terms[n - 1];
    if (c == 0.0) return s;
    if (a == 0.0 || b == 0.0) {
        s.converged = false;
        s.ratio = std::numeric_limits<double>::infinity();
        return s;
    }
    s.ratio = std::max(b / a, c / b);
    if (s.ratio >= 1.0) {
        s.converged = false;
        return s;
    }
    s.tail = c * s.ratio / (1.0 - s.ratio);
    return s;
}

inline SeriesSum sum_with_tail(const std::vector<double>& terms, std::size_t from = 0) {
    SeriesSum s = geometric_tail(terms);
    for (std::size_t j = from; j < terms.size(); ++j) s.truncated += terms[j];
    return s;
}

struct ConditionII {
    std::vector<double> partial_sums;  ///< partial_sums[j] = sum_{i=1}^{j} sqrt(c_i) 2^{i/2} i^alpha
    double ratio = 0.0;                ///< fitted term ratio over the last four levels
    bool converged = false;
};

/// Partial sums of sum_{j>=1} sqrt(c_j) 2^{j/2} j^alpha; converged when the last four terms
/// decay geometrically.
inline ConditionII check_condition_ii(const std::vector<double>& cj, double alpha) {
    if (cj.size() < 9) throw Error(ErrorKind::InvalidArgument, "condition (ii) needs c_j up to j = 8");
    ConditionII c;
    std::vector<double> terms(cj.size(), 0.0);
    double sum = 0.0;
    c.partial_sums.push_back(0.0);
    for (std::size_t j = 1; j < cj.size(); ++j) {
        terms[j] = std::sqrt(cj[j]) * std::exp2(0.5 * static_cast<double>(j)) * std::pow(static_cast<double>(j), alpha);
        sum += terms[j];
        c.partial_sums.push_back(sum);
    }
    const std::size_t n = terms.size();
    const double first = terms[n - 4], last = terms[n - 1];
    if (last == 0.0) {
        c.converged = true;
        return c;
    }
    if (first == 0.0) {
        c.ratio = std::numeric_limits<double>::infinity();
        return c;
    }
    c.ratio = std::pow(last / first, 1.0 / 3.0);
    c.converged = c.ratio < 1.0;
    return c;
}

/// C = L (sqrt(c_0) + sum_{j>=1} sqrt(c_j) 2^{j/2} j^{beta}), L = 2 R_alpha^{1-gamma} L_gamma.
inline double compute_C(const std::vector<double>& cj, const BoundParams& params, double L_gamma, double R_alpha,
                        SeriesSum* detail = nullptr) {
    std::vector<double> terms(cj.size(), 0.0);
    for (std::size_t j = 0; j < cj.size(); ++j) {
        const double weight = j == 0 ? 1.0 : std::exp2(0.5 * static_cast<double>(j)) *
                                                 std::pow(static_cast<double>(j), params.beta());
        terms[j] = std::sqrt(cj[j]) * weight;
    }
    const SeriesSum s = sum_with_tail(terms);
    if (!s.converged) throw Error(ErrorKind::Diverged, "series defining C does not decay geometrically");
    if (detail) *detail = s;
    const double L = 2.0 * std::pow(R_alpha, 1.0 - params.gamma) * L_gamma;
    return L * s.total();
}

struct CnEpsn {
    double C_n = 0.0;
    double eps_n = 0.0;
};

/// eps_n = L_1 sum_{j>=n} sqrt(c_j) 2^{j/2};
/// C_n = 2 R_alpha^{beta/alpha} L_{1-beta/alpha} sum_{j>=n} sqrt(c_j) 2^{e(j)} j^beta,
/// e(j) = j/2 (half) or j (literal). Both tails majorised geometrically.
inline CnEpsn compute_Cn_epsn(const std::vector<double>& cj, int n, const BoundParams& params, double L_1,
                              double L_gamma, double R_alpha, ExponentVariant variant) {
    if (n < 0 || static_cast<std::size_t>(n) >= cj.size())
        throw Error(ErrorKind::InvalidArgument, "n outside the computed c_j range");
    std::vector<double> eps_terms(cj.size()), c_terms(cj.size());
    for (std::size_t j = 0; j < cj.size(); ++j) {
        const double jd = static_cast<double>(j);
        const double root = std::sqrt(cj[j]);
        eps_terms[j] = root * std::exp2(0.5 * jd);
        c_terms[j] = root * std::exp2(variant == ExponentVariant::Half ? 0.5 * jd : jd) * std::pow(jd, params.beta());
    }
    const SeriesSum e = sum_with_tail(eps_terms, static_cast<std::size_t>(n));
    const SeriesSum c = sum_with_tail(c_terms, static_cast<std::size_t>(n));
    if (!e.converged) throw Error(ErrorKind::Diverged, "series defining eps_n does not decay geometrically");
    if (!c.converged)
        throw Error(ErrorKind::Diverged, std::string("series defining C_n (variant ") +
                                             std::string(to_string(variant)) + ") does not decay geometrically");
    CnEpsn out;
    out.eps_n = L_1 * e.total();
    out.C_n = 2.0 * std::pow(R_alpha, params.beta() / params.alpha) * L_gamma * c.total();
    return out;
}

/// Modulus majorant of increments: logarithmic sigma(h) = C / ln^beta(e^alpha + 1/h), or
/// the power family sigma(h) = C h^kappa.
struct Sigma {
    enum class Family { Logarithmic, Power };
    Family family = Family::Logarithmic;
    double C = 1.0;
    double alpha = 1.0;
    double beta = 0.9;
    double kappa = 1.0;

    static Sigma logarithmic(double C, double alpha, double beta) { return {Family::Logarithmic, C, alpha, beta, 1.0}; }
    static Sigma power(double C, double kappa) { return {Family::Power, C, 1.0, 0.9, kappa}; }

    double operator()(double h) const {
        if (family == Family::Power) return C * std::pow(h, kappa);
        return at_log_inverse(-std::log(h));
    }

    /// sigma(e^{-t}), stable for large t.
    double at_log_inverse(double t) const {
        if (family == Family::Power) return C * std::exp(-kappa * t);
        const double l = t > alpha ? t + std::log1p(std::exp(alpha - t)) : alpha + std::log1p(std::exp(t - alpha));
        return C / std::pow(l, beta);
    }

    /// -ln sigma^{-1}(y) by bisection on t = -ln h; -inf when y is above the range of sigma.
    double neg_log_inverse(double y) const {
        if (!(y > 0.0)) return std::numeric_limits<double>::infinity();
        if (family == Family::Logarithmic && y >= C / std::pow(alpha, beta))
            return -std::numeric_limits<double>::infinity();
        double lo = -1.0, hi = 1.0;
        while (at_log_inverse(lo) < y) lo *= 2.0;
        while (at_log_inverse(hi) > y) hi *= 2.0;
        for (int i = 0; i < 2000 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++i) {
            const double mid = 0.5 * (lo + hi);
            (at_log_inverse(mid) > y ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    nlohmann::json to_json() const {
        if (family == Family::Power) return {{"family", "power"}, {"C", C}, {"kappa", kappa}};
        return {{"family", "logarithmic"}, {"C", C}, {"alpha", alpha}, {"beta", beta}};
    }
};

struct EntropyCheck {
    double integral_value = 0.0;
    double tail = 0.0;             ///< majorant of the part below the quadrature cutoff
    double singularity_exponent = 0.0;  ///< p in the fitted A y^{-p} near 0
    bool holds = false;
};

/// int_0^eps sqrt(-ln sigma^{-1}(h)) dh (positive part of the logarithm), trapezoid in
/// s = ln h with step ds down to eps e^{-span}, plus a fitted A h^{-p} majorant below.
inline EntropyCheck check_entropy_condition(const Sigma& sigma, double epsilon, double ds = 0.01, double span = 40.0) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "entropy integral needs epsilon > 0");
    if (sigma.family == Sigma::Family::Logarithmic && !(sigma.beta > 0.5))
        throw Error(ErrorKind::InvalidArgument, "logarithmic sigma needs beta > 1/2");
    auto g = [&](double y) { return std::sqrt(std::max(0.0, sigma.neg_log_inverse(y))); };
    const double s_hi = std::log(epsilon);
    const double s_lo = s_hi - span;
    const auto steps = static_cast<std::size_t>(std::ceil(span / ds));
    const double step = span / static_cast<double>(steps);
    EntropyCheck out;
    double sum = 0.0;
    for (std::size_t i = 0; i <= steps; ++i) {
        const double s = s_lo + step * static_cast<double>(i);
        const double f = g(std::exp(s)) * std::exp(s);
        sum += (i == 0 || i == steps) ? 0.5 * f : f;
    }
    const double y0 = std::exp(s_lo), y1 = std::exp(s_lo + 1.0);
    const double g0 = g(y0), g1 = g(y1);
    if (g0 == 0.0) {
        out.holds = true;
    } else {
        out.singularity_exponent = g1 > 0.0 ? std::log(g0 / g1) : std::numeric_limits<double>::infinity();
        out.holds = out.singularity_exponent < 1.0;
        out.tail = out.holds ? g0 * y0 / (1.0 - out.singularity_exponent) : std::numeric_limits<double>::infinity();
    }
    out.integral_value = sum * step + out.tail;
    return out;
}

struct DeltaTerms {
    double sigma_half_T = 0.0;
    double nu = 0.0;
    double delta = 0.0;
};

/// sigma(h) = C / ln^beta(e^alpha + 1/h), nu = min(eps, sigma(T/2)),
/// delta = (nu / sqrt 2) (sqrt(ln(T + 1)) + (1 - 1/(2 beta))^{-1} (C/nu)^{1/(2 beta)}).
/// Returns delta = 0 in the degenerate limit C = 0 or eps = 0.
inline DeltaTerms compute_delta_terms(double eps, double T, double C, const BoundParams& params) {
    if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "domain length must be positive");
    if (eps < 0.0 || C < 0.0) throw Error(ErrorKind::InvalidArgument, "eps and C must be nonnegative");
    const double beta = params.beta();
    if (!(beta > 0.5)) throw Error(ErrorKind::InvalidArgument, "beta must exceed 1/2");
    DeltaTerms d;
    d.sigma_half_T = Sigma::logarithmic(C, params.alpha, beta)(0.5 * T);
    d.nu = std::min(eps, d.sigma_half_T);
    if (d.nu == 0.0) return d;
    d.delta = d.nu / std::numbers::sqrt2 *
              (std::sqrt(std::log(T + 1.0)) + std::pow(C / d.nu, 1.0 / (2.0 * beta)) / (1.0 - 1.0 / (2.0 * beta)));
    return d;
}

inline double compute_delta(double eps, double T, double C, const BoundParams& params) {
    return compute_delta_terms(eps, T, C, params).delta;
}

/// 2 exp(-(u - sqrt(8 u delta))^2 / (2 eps^2)) for u >= 8 delta; exactly 2 at the threshold.
inline double tail_bound(double u, double eps, double delta) {
    const double threshold = 8.0 * delta;
    if (u < threshold)
        throw Error(ErrorKind::ThresholdNotExceeded,
                    "u = " + format_double(u) + " is below 8 delta = " + format_double(threshold));
    if (u == threshold) return 2.0;
    const double a = u - std::sqrt(8.0 * u * delta);
    if (eps == 0.0) return 0.0;
    return 2.0 * std::exp(-(a * a) / (2.0 * eps * eps));
}

/// 2^{j/2} max(1, j^alpha) R_alpha ln^{-alpha}(e^alpha + 1/|x - y|): majorant of |psi_jk(x) - psi_jk(y)|.
inline double increment_bound(double R_alpha, double alpha, int j, double x, double y) {
    if (x == y) return 0.0;
    const double jd = static_cast<double>(j);
    return std::exp2(0.5 * jd) * std::max(1.0, std::pow(jd, alpha)) * R_alpha *
           std::pow(std::log(std::exp(alpha) + 1.0 / std::abs(x - y)), -alpha);
}

/// 2^{j/2+1} R_alpha^{1-gamma} L_gamma max(1, j^{alpha(1-gamma)}) ln^{-alpha(1-gamma)}(e^alpha + 1/|x-y|):
/// majorant of sum_k |psi_jk(x) - psi_jk(y)|.
inline double modulus_bound(double R_alpha, double L_gamma, const BoundParams& params, int j, double x, double y) {
    if (x == y) return 0.0;
    const double b = params.beta();
    const double jd = static_cast<double>(j);
    return std::exp2(0.5 * jd + 1.0) * std::pow(R_alpha, 1.0 - params.gamma) * L_gamma *
           std::max(1.0, std::pow(jd, b)) * std::pow(std::log(std::exp(params.alpha) + 1.0 / std::abs(x - y)), -b);
}

struct BoundOptions {
    BoundParams params;
    int j_max = 12;
    ExponentVariant variant = ExponentVariant::Half;
    EnvelopeMode envelope = EnvelopeMode::Flat;
    CjSource cj_source = CjSource::Empirical;
    CjMethod cj_method = CjMethod::Spectral;
    double domain_length = 30.0;
    double u_max = default_u_max;
    double du = default_du;
};

/// Every constant of the convergence-rate chain for one (model, wavelet system) pair.
/// Sequences indexed by n are stored for n = 1 .. j_max (element n - 1).
struct BoundReport {
    BoundOptions options;
    std::string model;
    std::string wavelet;
    double a_hat = 0.0;
    double envelope_at_zero = 0.0;
    double L_gamma = 0.0;
    double L_1 = 0.0;
    double L_gamma_radial = 0.0;
    double L_1_radial = 0.0;
    RAlpha R_alpha;
    double tail_exponent = 0.0;
    ConditionI condition_i;
    std::vector<double> cj;
    ConditionII condition_ii;
    double C = 0.0;
    SeriesSum C_series;
    std::vector<double> C_n, eps_n, nu_n, delta_n;
    double eps0 = 0.0;
    Sigma sigma;
    EntropyCheck entropy;

    double tail(double u, int n) const {
        if (n < 1 || n > static_cast<int>(eps_n.size())) throw Error(ErrorKind::InvalidArgument, "n outside report");
        return tail_bound(u, eps_n[static_cast<std::size_t>(n - 1)], delta_n[static_cast<std::size_t>(n - 1)]);
    }
    double threshold(int n) const {
        if (n < 1 || n > static_cast<int>(delta_n.size())) throw Error(ErrorKind::InvalidArgument, "n outside report");
        return 8.0 * delta_n[static_cast<std::size_t>(n - 1)];
    }

    nlohmann::json to_json() const;
    static BoundReport from_json(const nlohmann::json& j);
};

inline nlohmann::json bound_options_json(const BoundOptions& o) {
    return {{"alpha", o.params.alpha},   {"gamma", o.params.gamma},
            {"beta", o.params.beta()},   {"kappa", o.params.kappa},
            {"j_max", o.j_max},          {"variant", to_string(o.variant)},
            {"envelope", to_string(o.envelope)}, {"cj_source", to_string(o.cj_source)},
            {"cj_method", to_string(o.cj_method)}, {"domain_length", o.domain_length},
            {"u_max", o.u_max},          {"du", o.du}};
}

inline BoundOptions bound_options_from_json(const nlohmann::json& j, BoundOptions o = {}) {
    o.params.alpha = j.value("alpha", o.params.alpha);
    o.params.gamma = j.value("gamma", o.params.gamma);
    o.params.kappa = j.value("kappa", o.params.kappa);
    o.j_max = j.value("j_max", o.j_max);
    if (j.contains("variant")) o.variant = parse_variant(j.at("variant").get<std::string>());
    if (j.contains("envelope")) o.envelope = parse_envelope_mode(j.at("envelope").get<std::string>());
    if (j.contains("cj_source")) o.cj_source = parse_cj_source(j.at("cj_source").get<std::string>());
    if (j.contains("cj_method")) o.cj_method = parse_cj_method(j.at("cj_method").get<std::string>());
    o.domain_length = j.value("domain_length", o.domain_length);
    o.u_max = j.value("u_max", o.u_max);
    o.du = j.value("du", o.du);
    return o;
}

inline nlohmann::json BoundReport::to_json() const {
    nlohmann::json j;
    j["options"] = bound_options_json(options);
    j["gamma_note"] = "gamma is a free choice; the theory only asks for gamma close enough to 0";
    j["model"] = model;
    j["wavelet"] = wavelet;
    j["a_hat"] = a_hat;
    j["envelope_at_zero"] = envelope_at_zero;
    j["L_gamma"] = L_gamma;
    j["L_1"] = L_1;
    j["L_gamma_radial"] = L_gamma_radial;
    j["L_1_radial"] = L_1_radial;
    j["R_alpha"] = {{"truncated", R_alpha.truncated}, {"tail", R_alpha.tail}, {"value", R_alpha.value()}};
    j["tail_exponent"] = tail_exponent;
    j["condition_i"] = {{"truncated", condition_i.truncated},
                        {"tail", condition_i.tail},
                        {"tail_exponent", condition_i.tail_exponent},
                        {"holds", condition_i.holds_numerically}};
    j["cj"] = cj;
    j["condition_ii"] = {{"partial_sums", condition_ii.partial_sums},
                         {"ratio", condition_ii.ratio},
                         {"converged", condition_ii.converged}};
    j["C"] = C;
    j["C_series"] = {{"truncated", C_series.truncated}, {"tail", C_series.tail}, {"ratio", C_series.ratio}};
    j["C_n"] = C_n;
    j["eps_n"] = eps_n;
    j["nu_n"] = nu_n;
    j["delta_n"] = delta_n;
    j["eps0"] = eps0;
    j["sigma"] = sigma.to_json();
    j["entropy"] = {{"integral", entropy.integral_value},
                    {"tail", entropy.tail},
                    {"singularity_exponent", entropy.singularity_exponent},
                    {"holds", entropy.holds}};
    return j;
}

inline BoundReport BoundReport::from_json(const nlohmann::json& j) {
    BoundReport r;
    r.options = bound_options_from_json(j.at("options"));
    r.model = j.at("model").get<std::string>();
    r.wavelet = j.at("wavelet").get<std::string>();
    r.a_hat = j.at("a_hat").get<double>();
    r.envelope_at_zero = j.at("envelope_at_zero").get<double>();
    r.L_gamma = j.at("L_gamma").get<double>();
    r.L_1 = j.at("L_1").get<double>();
    r.L_gamma_radial = j.at("L_gamma_radial").get<double>();
    r.L_1_radial = j.at("L_1_radial").get<double>();
    r.R_alpha.truncated = j.at("R_alpha").at("truncated").get<double>();
    r.R_alpha.tail = j.at("R_alpha").at("tail").get<double>();
    r.tail_exponent = j.at("tail_exponent").get<double>();
    const auto& ci = j.at("condition_i");
    r.condition_i.truncated = ci.at("truncated").get<double>();
    r.condition_i.tail = ci.at("tail").get<double>();
    r.condition_i.tail_exponent = ci.at("tail_exponent").get<double>();
    r.condition_i.holds_numerically = ci.at("holds").get<bool>();
    r.cj = j.at("cj").get<std::vector<double>>();
    const auto& cii = j.at("condition_ii");
    r.condition_ii.partial_sums = cii.at("partial_sums").get<std::vector<double>>();
    r.condition_ii.ratio = cii.at("ratio").get<double>();
    r.condition_ii.converged = cii.at("converged").get<bool>();
    r.C = j.at("C").get<double>();
    r.C_series.truncated = j.at("C_series").at("truncated").get<double>();
    r.C_series.tail = j.at("C_series").at("tail").get<double>();
    r.C_series.ratio = j.at("C_series").at("ratio").get<double>();
    r.C_n = j.at("C_n").get<std::vector<double>>();
    r.eps_n = j.at("eps_n").get<std::vector<double>>();
    r.nu_n = j.at("nu_n").get<std::vector<double>>();
    r.delta_n = j.at("delta_n").get<std::vector<double>>();
    r.eps0 = j.at("eps0").get<double>();
    const auto& s = j.at("sigma");
    r.sigma = s.at("family").get<std::string>() == "power"
                  ? Sigma::power(s.at("C").get<double>(), s.at("kappa").get<double>())
                  : Sigma::logarithmic(s.at("C").get<double>(), s.at("alpha").get<double>(), s.at("beta").get<double>());
    const auto& e = j.at("entropy");
    r.entropy.integral_value = e.at("integral").get<double>();
    r.entropy.tail = e.at("tail").get<double>();
    r.entropy.singularity_exponent = e.at("singularity_exponent").get<double>();
    r.entropy.holds = e.at("holds").get<bool>();
    return r;
}

/// c_j for j = 0 .. j_max from the chosen source.
inline std::vector<double> compute_cj_sequence(const CovarianceModel& model, const WaveletSystem& system,
                                               const BoundOptions& o, Interval domain) {
    std::vector<double> cj;
    const double lip = lipschitz_constant_psi(system, o.params.kappa);
    for (int j = 0; j <= o.j_max; ++j)
        cj.push_back(o.cj_source == CjSource::SpectralBound
                         ? example1_cj_bound(model, system, o.params.kappa, j, lip)
                         : estimate_cj(model, system, j, domain, o.cj_method));
    return cj;
}

/// Builds the full report. Raises TruncationTooSmall if the R_alpha tail is too heavy and
/// Diverged if a series does not decay.
inline BoundReport compute_bound_report(const CovarianceModel& model, const WaveletSystem& system,
                                        const PsiSpectrum& spectrum, const BoundOptions& o) {
    o.params.validate();
    if (o.j_max < 8) throw Error(ErrorKind::InvalidArgument, "j_max must be at least 8");
    BoundReport r;
    r.options = o;
    r.model = model.name();
    r.wavelet = std::string(to_string(system.filter().family)) + "-" + std::to_string(system.filter().order);
    r.a_hat = system.a_hat();
    const Envelope env = system.envelope(o.envelope);
    const Envelope radial = system.envelope(EnvelopeMode::Radial);
    r.envelope_at_zero = env.at_zero();
    r.L_gamma = compute_L_gamma(env, r.a_hat, o.params.gamma);
    r.L_1 = compute_L_gamma(env, r.a_hat, 1.0);
    r.L_gamma_radial = compute_L_gamma(radial, r.a_hat, o.params.gamma);
    r.L_1_radial = compute_L_gamma(radial, r.a_hat, 1.0);
    r.condition_i = check_condition_i(spectrum, o.params.alpha);
    r.tail_exponent = spectrum.tail.exponent;
    r.R_alpha = compute_R_alpha(spectrum, o.params.alpha);
    const Interval domain{0.0, o.domain_length};
    r.cj = compute_cj_sequence(model, system, o, domain);
    r.condition_ii = check_condition_ii(r.cj, o.params.alpha);
    r.C = compute_C(r.cj, o.params, r.L_gamma, r.R_alpha.value(), &r.C_series);
    for (int n = 1; n <= o.j_max; ++n) {
        const auto ce = compute_Cn_epsn(r.cj, n, o.params, r.L_1, r.L_gamma, r.R_alpha.value(), o.variant);
        const auto d = compute_delta_terms(ce.eps_n, o.domain_length, ce.C_n, o.params);
        r.C_n.push_back(ce.C_n);
        r.eps_n.push_back(ce.eps_n);
        r.nu_n.push_back(d.nu);
        r.delta_n.push_back(d.delta);
    }
    r.eps0 = compute_Cn_epsn(r.cj, 0, o.params, r.L_1, r.L_gamma, r.R_alpha.value(), ExponentVariant::Half).eps_n;
    r.sigma = Sigma::logarithmic(r.C, o.params.alpha, o.params.beta());
    if (r.C > 0.0) {
        // Above sup sigma = C / alpha^beta the integrand vanishes.
        r.entropy = check_entropy_condition(r.sigma, r.C / std::pow(o.params.alpha, o.params.beta()));
    } else {
        r.entropy.holds = true;
    }
    return r;
}

}  // namespace wavegp
