#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "wavegp/bounds.hpp"

using namespace wavegp;

namespace {

const WaveletSystem& system_of(int order) {
    static std::map<int, WaveletSystem> cache;
    auto it = cache.find(order);
    if (it == cache.end())
        it = cache.emplace(order, cascade_evaluate(build_filter(order == 1 ? Family::Haar : Family::Daubechies, order), 12))
                 .first;
    return it->second;
}
const WaveletSystem& haar() { return system_of(1); }
const WaveletSystem& d8() { return system_of(4); }

const PsiSpectrum& d8_spectrum() {
    static const PsiSpectrum s = fourier_transform_psi(d8());
    return s;
}

const BoundReport& example2_report() {
    static const BoundReport r = compute_bound_report(CovarianceModel::squared_exponential(), d8(), d8_spectrum(), {});
    return r;
}

/// sup over x in [0,1) of sum_k |psi(x - k)|^gamma, on a grid finer than the sample grid.
double brute_sup_S(const WaveletSystem& s, double gamma) {
    double best = 0.0;
    const int steps = 1 << 13;
    for (int i = 0; i < steps; ++i) {
        const double x = static_cast<double>(i) / steps;
        double sum = 0.0;
        for (long k = -12; k <= 12; ++k) sum += std::pow(std::abs(s.evaluate(WaveletKind::Mother, x - k)), gamma);
        best = std::max(best, sum);
    }
    return best;
}

}  // namespace

TEST(BoundParams, Validation) {
    BoundParams p;
    EXPECT_DOUBLE_EQ(p.beta(), 0.9);
    EXPECT_NO_THROW(p.validate());
    EXPECT_THROW((BoundParams{0.5, 0.1, 1.0}).validate(), Error);
    EXPECT_THROW((BoundParams{1.0, 0.0, 1.0}).validate(), Error);
    EXPECT_THROW((BoundParams{0.6, 0.5, 1.0}).validate(), Error);
    EXPECT_THROW((BoundParams{1.0, 0.1, 1.5}).validate(), Error);
}

TEST(LGamma, HaarFlatEnvelopeGivesFive) {
    EXPECT_EQ(compute_L_gamma(haar().envelope(EnvelopeMode::Flat), haar().a_hat(), 1.0), 5.0);
}

TEST(LGamma, SmallHalfWidth) {
    Envelope e{0.1, 0.4, {2.0, 2.0, 1.0, 0.5}};
    EXPECT_DOUBLE_EQ(compute_L_gamma(e, 0.4, 0.5), 3.0 * std::sqrt(2.0));
    EXPECT_THROW(compute_L_gamma(e, 0.4, 0.0), Error);
}

TEST(LGamma, DominatesBruteForceTranslateSum) {
    for (int order : {1, 2, 3, 4}) {
        const auto& s = system_of(order);
        for (double gamma : {0.25, 0.5, 1.0}) {
            const double brute = brute_sup_S(s, gamma);
            for (auto mode : {EnvelopeMode::Flat, EnvelopeMode::Radial})
                EXPECT_LE(brute, compute_L_gamma(s.envelope(mode), s.a_hat(), gamma))
                    << "order " << order << " gamma " << gamma << " " << to_string(mode);
        }
    }
}

TEST(LGamma, RadialIsTighterThanFlat) {
    EXPECT_LE(compute_L_gamma(d8().envelope(EnvelopeMode::Radial), d8().a_hat(), 1.0),
              compute_L_gamma(d8().envelope(EnvelopeMode::Flat), d8().a_hat(), 1.0));
}

TEST(RAlpha, ZeroTransformGivesZero) {
    auto z = PsiSpectrum::zero(100.0, 0.5);
    z.tail = fit_tail(z);
    EXPECT_EQ(compute_R_alpha(z, 1.0).value(), 0.0);
    const auto ci = check_condition_i(z, 1.0);
    EXPECT_EQ(ci.total(), 0.0);
    EXPECT_TRUE(ci.holds_numerically);
}

TEST(RAlpha, StableUnderRefinementForD8) {
    const double base = compute_R_alpha(d8_spectrum(), 1.0).value();
    const auto fine = fourier_transform_psi(d8(), 4.0 * default_u_max, default_du / 4.0);
    const double refined = compute_R_alpha(fine, 1.0).value();
    EXPECT_NEAR(refined / base, 1.0, 5e-3);
    EXPECT_LE(compute_R_alpha(d8_spectrum(), 1.0).tail, 0.01 * base);
}

TEST(RAlpha, HaarTailTooHeavy) {
    const auto spec = fourier_transform_psi(haar());
    try {
        compute_R_alpha(spec, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TruncationTooSmall);
    }
}

TEST(RAlpha, NondecreasingInAlpha) {
    double prev = 0.0;
    for (double a : {0.6, 0.8, 1.0, 1.25}) {
        const double v = compute_R_alpha(d8_spectrum(), a).value();
        EXPECT_GE(v, prev) << a;
        prev = v;
    }
}

TEST(ConditionI, D8HoldsHaarDoesNot) {
    const auto d = check_condition_i(d8_spectrum(), 1.0);
    EXPECT_TRUE(d.holds_numerically);
    EXPECT_TRUE(std::isfinite(d.total()));
    EXPECT_GT(d.truncated, 0.0);
    // |psi_hat| ~ 1/u for Haar, so int ln(1 + u) / u du diverges.
    const auto h = check_condition_i(fourier_transform_psi(haar()), 1.0);
    EXPECT_FALSE(h.holds_numerically);
    EXPECT_TRUE(std::isinf(h.tail));
}

TEST(Cj, ZeroModel) {
    for (auto method : {CjMethod::Time, CjMethod::Spectral})
        EXPECT_EQ(estimate_cj(CovarianceModel::zero(), d8(), 1, {0.0, 4.0}, method), 0.0);
}

TEST(Cj, TimeAndSpectralAgree) {
    const auto m = CovarianceModel::squared_exponential();
    const PsiTransform t(d8().filter());
    for (int j = 0; j <= 3; ++j) {
        for (long lag : {0L, 1L, 3L}) {
            const double spectral = coefficient_covariance_spectral(m, t, j, lag);
            const double time = coefficient_covariance_time(m, d8(), j, lag);
            const double scale = coefficient_covariance_spectral(m, t, j, 0);
            EXPECT_NEAR(time, spectral, 1e-4 * scale) << "j " << j << " lag " << lag;
        }
        EXPECT_NEAR(estimate_cj(m, d8(), j, {0, 30}, CjMethod::Time) / estimate_cj(m, d8(), j, {0, 30}, CjMethod::Spectral),
                    1.0, 1e-4);
    }
}

TEST(Cj, KernelFormMatchesToeplitzForm) {
    const auto m = CovarianceModel::squared_exponential();
    const auto as_kernel = CovarianceModel::custom("se_kernel", [](double t, double s) { return std::exp(-(t - s) * (t - s)); });
    for (int j : {0, 2}) {
        const double toeplitz = coefficient_covariance_time(m, d8(), j, 0, 8);
        EXPECT_NEAR(coefficient_covariance_kernel(as_kernel, d8(), j, 5, 5, 8), toeplitz, 1e-12 * toeplitz);
        EXPECT_NEAR(coefficient_covariance_kernel(as_kernel, d8(), j, 5, 3, 8), coefficient_covariance_time(m, d8(), j, 2, 8),
                    1e-12 * toeplitz);
    }
    EXPECT_THROW(estimate_cj(as_kernel, d8(), 0, {0, 1}, CjMethod::Spectral), Error);
}

TEST(Cj, BrownianKernelMatchesItoIsometry) {
    // eta = int B psi_jk = int Psi_jk dB with Psi_jk(s) = int_s^inf psi_jk, so for supports in
    // t > 0 Var(eta_jk) = 4^{-j} int Psi^2 with Psi(x) = int_x^inf psi.
    const auto bm = CovarianceModel::custom("brownian", [](double t, double s) {
        return std::min(std::max(t, 0.0), std::max(s, 0.0));
    });
    const auto& psi = d8().psi_samples();
    const double h = d8().step();
    std::vector<double> tail(psi.size(), 0.0);
    for (std::size_t i = psi.size() - 1; i-- > 0;) tail[i] = tail[i + 1] + 0.5 * h * (psi[i] + psi[i + 1]);
    double energy = 0.0;
    for (std::size_t i = 0; i + 1 < tail.size(); ++i) energy += 0.5 * h * (tail[i] * tail[i] + tail[i + 1] * tail[i + 1]);
    for (int j : {0, 1}) {
        const double expected = std::exp2(-2.0 * j) * energy;
        EXPECT_NEAR(coefficient_covariance_kernel(bm, d8(), j, 3, 3, 8), expected, 1e-4 * expected) << j;
        // Supports straddling 0 see a smaller variance, so the domain maximum is the interior value.
        const double c = estimate_cj(bm, d8(), j, {0.0, 2.0}, CjMethod::Time);
        EXPECT_NEAR(c, expected, 1e-3 * expected) << j;
        EXPECT_LT(coefficient_covariance_kernel(bm, d8(), j, -5, -5, 8), expected);
    }
}

TEST(Lipschitz, HaarConstant) {
    EXPECT_DOUBLE_EQ(lipschitz_constant_psi(haar()), 0.5);
    EXPECT_DOUBLE_EQ(lipschitz_constant_psi(3.0, 2.0), 2.0 * lipschitz_constant_psi(3.0, 1.0));
    EXPECT_DOUBLE_EQ(lipschitz_constant_psi(haar(), 1.0), 0.5);
}

TEST(Lipschitz, DominatesDifferenceQuotients) {
    std::mt19937_64 rng(3);
    for (const auto* s : {&haar(), &d8()}) {
        const PsiTransform t(s->filter());
        const double shift = s->psi_shift();
        // Transform of psi(. + shift), supported in [-a_hat, a_hat].
        auto centred = [&](double u) { return t(u) * std::polar(1.0, u * shift); };
        const double lip = lipschitz_constant_psi(*s);
        std::uniform_real_distribution<double> U(-20.0, 20.0), D(1e-4, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const double u = U(rng), v = u + D(rng);
            worst = std::max(worst, std::abs(centred(u) - centred(v)) / (v - u));
        }
        EXPECT_LE(worst, lip);
        // Order-kappa constant: |psi_hat(u)| <= C_kappa |u|^kappa.
        for (double kappa : {0.5, 1.0}) {
            const double c = lipschitz_constant_psi(*s, kappa);
            for (double u = 0.01; u < 200.0; u *= 1.1) EXPECT_LE(std::abs(t(u)), c * std::pow(u, kappa)) << u;
        }
    }
}

TEST(Example1, HaarClosedForm) {
    EXPECT_NEAR(example1_cj_bound(CovarianceModel::squared_exponential(), haar(), 1.0, 0), 4.0 / std::sqrt(std::numbers::pi),
                1e-6);
}

TEST(Example1, BoundShrinksByFourPerLevel) {
    const auto m = CovarianceModel::squared_exponential();
    for (int j = 0; j < 6; ++j)
        EXPECT_NEAR(example1_cj_bound(m, d8(), 1.0, j) / example1_cj_bound(m, d8(), 1.0, j + 1), 4.0, 1e-12);
    EXPECT_THROW(example1_cj_bound(CovarianceModel::custom("k", [](double, double) { return 0.0; }), d8(), 1.0, 0), Error);
}

TEST(Example1, CertifiedBoundDominatesEmpiricalCj) {
    const auto m = CovarianceModel::squared_exponential();
    const double lip = lipschitz_constant_psi(d8(), 1.0);
    const double b0 = example1_cj_bound(m, d8(), 1.0, 0, lip);
    for (int j = 0; j <= 8; ++j) {
        const double c = estimate_cj(m, d8(), j, {0, 30}, CjMethod::Spectral);
        const double b = example1_cj_bound(m, d8(), 1.0, j, lip);
        EXPECT_LE(c, b) << j;
        EXPECT_NEAR(b, b0 * std::exp2(-2.0 * j), 1e-12 * b0);
    }
}

TEST(Series, GeometricTail) {
    const auto s = sum_with_tail({1.0, 0.5, 0.25, 0.125});
    EXPECT_DOUBLE_EQ(s.truncated, 1.875);
    EXPECT_DOUBLE_EQ(s.ratio, 0.5);
    EXPECT_DOUBLE_EQ(s.total(), 2.0);
    EXPECT_FALSE(geometric_tail({1.0, 1.0, 1.0}).converged);
    EXPECT_EQ(geometric_tail({1.0, 0.0, 0.0}).tail, 0.0);
    EXPECT_THROW(geometric_tail({1.0, 2.0}), Error);
}

TEST(ConditionII, GeometricSequenceConverges) {
    std::vector<double> cj;
    for (int j = 0; j <= 12; ++j) cj.push_back(std::pow(4.0, -2.0 * j));
    const auto c = check_condition_ii(cj, 1.0);
    EXPECT_TRUE(c.converged);
    EXPECT_LT(c.ratio, 1.0);
    ASSERT_EQ(c.partial_sums.size(), cj.size());
    EXPECT_EQ(c.partial_sums[0], 0.0);
    EXPECT_DOUBLE_EQ(c.partial_sums[1], 0.25 * std::sqrt(2.0));
}

TEST(ConditionII, ConstantSequenceDiverges) {
    EXPECT_FALSE(check_condition_ii(std::vector<double>(13, 1.0), 1.0).converged);
    EXPECT_THROW(check_condition_ii(std::vector<double>(8, 1.0), 1.0), Error);
}

TEST(ConditionII, EmpiricalExampleTwoConverges) {
    EXPECT_TRUE(example2_report().condition_ii.converged);
}

TEST(ConstantC, Cases) {
    const BoundParams p;
    EXPECT_EQ(compute_C(std::vector<double>(13, 0.0), p, 2.0, 3.0), 0.0);
    BoundParams unit{10.0 / 9.0, 0.1, 1.0};
    ASSERT_NEAR(unit.beta(), 1.0, 1e-15);
    const double L = 2.0 * std::pow(3.0, 0.9) * 2.0;
    EXPECT_NEAR(compute_C({0.0, 1.0, 0.0, 0.0}, unit, 2.0, 3.0), std::sqrt(2.0) * L, 1e-12);
    try {
        compute_C(std::vector<double>(13, 1.0), p, 2.0, 3.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Diverged);
    }
}

TEST(ConstantC, StableUnderDoubledTruncation) {
    BoundOptions o;
    o.j_max = 24;
    const auto& r = example2_report();
    const auto longer = compute_cj_sequence(CovarianceModel::squared_exponential(), d8(), o, {0, 30});
    const double C24 = compute_C(longer, o.params, r.L_gamma, r.R_alpha.value());
    EXPECT_GT(r.C, 0.0);
    EXPECT_NEAR(C24 / r.C, 1.0, 0.01);
    EXPECT_LE(C24, r.C * (1.0 + 1e-12));
}

TEST(CnEpsn, BeyondSupportIsZero) {
    std::vector<double> cj{1.0, 0.5, 0.0, 0.0, 0.0};
    const auto r = compute_Cn_epsn(cj, 2, {}, 5.0, 3.0, 2.0, ExponentVariant::Half);
    EXPECT_EQ(r.C_n, 0.0);
    EXPECT_EQ(r.eps_n, 0.0);
    EXPECT_THROW(compute_Cn_epsn(cj, 5, {}, 5.0, 3.0, 2.0, ExponentVariant::Half), Error);
}

TEST(CnEpsn, GeometricClosedForm) {
    std::vector<double> cj;
    for (int j = 0; j <= 12; ++j) cj.push_back(std::pow(4.0, -j));
    const double L1 = 5.0;
    for (int n : {1, 3, 6}) {
        const auto r = compute_Cn_epsn(cj, n, {}, L1, 3.0, 2.0, ExponentVariant::Half);
        EXPECT_NEAR(r.eps_n, L1 * std::exp2(-0.5 * n) / (1.0 - std::sqrt(0.5)), 1e-12) << n;
    }
    // The literal 2^j weight makes sqrt(c_j) 2^j j^beta grow for c_j = 4^{-j}.
    try {
        compute_Cn_epsn(cj, 1, {}, L1, 3.0, 2.0, ExponentVariant::Literal);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Diverged);
    }
}

TEST(Report, SequencesNonincreasing) {
    const auto& r = example2_report();
    ASSERT_EQ(r.eps_n.size(), 12u);
    for (std::size_t i = 1; i < r.eps_n.size(); ++i) {
        EXPECT_LT(r.eps_n[i], r.eps_n[i - 1]) << i;
        EXPECT_LE(r.C_n[i], r.C_n[i - 1]) << i;
        EXPECT_LE(r.delta_n[i], r.delta_n[i - 1]) << i;
    }
    EXPECT_GE(r.eps0, r.eps_n[0]);
    EXPECT_TRUE(r.condition_i.holds_numerically);
    EXPECT_TRUE(r.entropy.holds);
    EXPECT_DOUBLE_EQ(r.sigma.beta, 0.9);
}

TEST(Report, LiteralVariantDivergesForExampleOneRates) {
    BoundOptions o;
    o.variant = ExponentVariant::Literal;
    o.cj_source = CjSource::SpectralBound;
    try {
        compute_bound_report(CovarianceModel::squared_exponential(), d8(), d8_spectrum(), o);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Diverged);
    }
}

TEST(Report, JsonRoundTrip) {
    const auto& r = example2_report();
    const auto back = BoundReport::from_json(nlohmann::json::parse(r.to_json().dump()));
    EXPECT_EQ(back.to_json(), r.to_json());
    EXPECT_EQ(back.delta_n, r.delta_n);
    EXPECT_EQ(back.cj, r.cj);
}

TEST(Delta, DualEvaluation) {
    const auto& r = example2_report();
    const BoundParams p;
    const double T = 30.0, eps = r.eps_n[0], C = r.C_n[0];
    // Second route: sigma(T/2) through logs, factors regrouped.
    const double b = p.beta();
    const double s_half = std::exp(std::log(C) - b * std::log(std::log(std::exp(p.alpha) + 2.0 / T)));
    const double nu = eps < s_half ? eps : s_half;
    const double second = std::sqrt(0.5) * (nu * std::sqrt(std::log1p(T)) +
                                            2.0 * b / (2.0 * b - 1.0) * std::exp(std::log(nu) + (std::log(C) - std::log(nu)) / (2.0 * b)));
    EXPECT_NEAR(r.delta_n[0], second, 1e-12 * second);
    EXPECT_DOUBLE_EQ(compute_delta(eps, T, C, p), r.delta_n[0]);
}

TEST(Delta, DegenerateAndBetaOne) {
    const BoundParams p;
    EXPECT_EQ(compute_delta(1.0, 30.0, 0.0, p), 0.0);
    double prev = compute_delta(1.0, 30.0, 1.0, p);
    for (double C : {0.1, 0.01, 1e-4, 1e-8}) {
        const double d = compute_delta(1.0, 30.0, C, p);
        EXPECT_LT(d, prev);
        prev = d;
    }
    EXPECT_LT(prev, 1e-6);
    const BoundParams one{2.0, 0.5, 1.0};
    ASSERT_DOUBLE_EQ(one.beta(), 1.0);
    const auto t = compute_delta_terms(0.01, 10.0, 3.0, one);
    EXPECT_DOUBLE_EQ(t.nu, 0.01);
    EXPECT_NEAR(t.delta, 0.01 / std::sqrt(2.0) * (std::sqrt(std::log(11.0)) + 2.0 * std::sqrt(3.0 / 0.01)), 1e-13);
}

TEST(TailBound, Boundary) {
    EXPECT_EQ(tail_bound(8.0 * 0.37, 1.3, 0.37), 2.0);
    EXPECT_DOUBLE_EQ(tail_bound(2.0, 1.0, 0.0), 2.0 * std::exp(-2.0));
    try {
        tail_bound(1.0, 1.0, 0.2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ThresholdNotExceeded);
    }
}

TEST(TailBound, Monotone) {
    const double delta = 0.05, eps = 0.4;
    double prev = 2.0;
    for (double u = 8 * delta * 1.001; u < 5.0; u *= 1.05) {
        const double b = tail_bound(u, eps, delta);
        EXPECT_LT(b, prev);
        EXPECT_GT(b, 0.0);
        EXPECT_LE(tail_bound(u, eps * 1.1, delta), 2.0);
        EXPECT_GE(tail_bound(u, eps * 1.1, delta), b);
        if (u > 8 * delta * 1.2) EXPECT_GE(tail_bound(u, eps, delta * 1.1), b);
        prev = b;
    }
}

TEST(Entropy, PowerFamilyClosedForm) {
    // int_0^C sqrt(-ln(h / C)) dh = C Gamma(3/2)
    const double C = 2.5;
    const auto e = check_entropy_condition(Sigma::power(C, 1.0), C);
    EXPECT_TRUE(e.holds);
    EXPECT_NEAR(e.integral_value, C * std::sqrt(std::numbers::pi) / 2.0, 1e-3 * C);
}

TEST(Entropy, LogarithmicFamily) {
    for (double beta : {1.0, 0.9, 0.6}) {
        const auto s = Sigma::logarithmic(3.0, 1.0, beta);
        const double eps = 3.0;
        const auto e = check_entropy_condition(s, eps);
        EXPECT_TRUE(e.holds) << beta;
        EXPECT_NEAR(e.singularity_exponent, 1.0 / (2.0 * beta), 0.02) << beta;
        const auto fine = check_entropy_condition(s, eps, 0.0025);
        EXPECT_NEAR(fine.integral_value / e.integral_value, 1.0, 5e-3) << beta;
    }
    EXPECT_THROW(check_entropy_condition(Sigma::logarithmic(1.0, 1.0, 0.5), 1.0), Error);
}

TEST(Entropy, InverseIsConsistent) {
    const auto s = Sigma::logarithmic(2.0, 1.0, 0.9);
    for (double t : {-1.0, 0.5, 3.0, 40.0, 300.0}) EXPECT_NEAR(s.neg_log_inverse(s.at_log_inverse(t)), t, 1e-9 * std::max(1.0, t));
    EXPECT_TRUE(std::isinf(s.neg_log_inverse(2.0)));
}

TEST(Modulus, IncrementBoundsDominateD8) {
    const double R = compute_R_alpha(d8_spectrum(), 1.0).value();
    const BoundParams p;
    const double Lg = compute_L_gamma(d8().envelope(EnvelopeMode::Flat), d8().a_hat(), p.gamma);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> X(0.0, 4.0), logd(std::log(1e-4), std::log(2.0));
    std::uniform_int_distribution<int> J(0, 3);
    for (int i = 0; i < 100; ++i) {
        const int j = J(rng);
        const double x = X(rng), y = x + std::exp(logd(rng));
        double sum = 0.0;
        for (long k = -10; k <= (4L << j) + 10; ++k) {
            const double d = std::abs(d8().evaluate_dilated(WaveletKind::Mother, j, k, x) -
                                      d8().evaluate_dilated(WaveletKind::Mother, j, k, y));
            ASSERT_LE(d, increment_bound(R, p.alpha, j, x, y)) << j << " " << k << " " << x << " " << y;
            sum += d;
        }
        ASSERT_LE(sum, modulus_bound(R, Lg, p, j, x, y)) << j << " " << x << " " << y;
    }
}

TEST(Modulus, ShapeOfBound) {
    const BoundParams p;
    double prev = std::numeric_limits<double>::infinity();
    for (double d = 1.0; d > 1e-8; d /= 10.0) {
        const double b = modulus_bound(2.0, 3.0, p, 2, 0.0, d);
        EXPECT_LT(b, prev);
        prev = b;
    }
    EXPECT_EQ(modulus_bound(2.0, 3.0, p, 1, 0.5, 0.5), 0.0);
    // j = 0 and j = 1 share the max(1, j^beta) = 1 factor.
    EXPECT_DOUBLE_EQ(modulus_bound(2.0, 3.0, p, 1, 0.0, 0.1), std::sqrt(2.0) * modulus_bound(2.0, 3.0, p, 0, 0.0, 0.1));
}

TEST(Options, ParseAndJson) {
    EXPECT_EQ(parse_variant("literal"), ExponentVariant::Literal);
    EXPECT_EQ(parse_cj_source("spectral_bound"), CjSource::SpectralBound);
    EXPECT_EQ(parse_cj_method("time"), CjMethod::Time);
    EXPECT_THROW(parse_variant("double"), Error);
    BoundOptions o;
    o.params.gamma = 0.2;
    o.variant = ExponentVariant::Literal;
    o.envelope = EnvelopeMode::Radial;
    const auto back = bound_options_from_json(bound_options_json(o));
    EXPECT_EQ(bound_options_json(back), bound_options_json(o));
}
