#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "wavegp/error.hpp"
#include "wavegp/quadrature.hpp"

namespace wavegp {

enum class CovarianceKind { SquaredExponential, Exponential, Custom };

/// Covariance R(t, s) of a zero-mean real process. Stationary models also expose R(tau) and,
/// when known, the spectral density R_hat(z) = int R(tau) e^{-iz tau} dtau.
class CovarianceModel {
public:
    using Kernel = std::function<double(double, double)>;
    using Stationary = std::function<double(double)>;

    /// R(tau) = exp(-(tau/scale)^2), R_hat(z) = scale sqrt(pi) exp(-(scale z)^2 / 4).
    static CovarianceModel squared_exponential(double scale = 1.0) {
        check_scale(scale);
        CovarianceModel m;
        m.kind_ = CovarianceKind::SquaredExponential;
        m.scale_ = scale;
        m.name_ = "squared_exponential";
        m.stationary_ = [scale](double tau) { return std::exp(-(tau / scale) * (tau / scale)); };
        m.spectral_ = [scale](double z) {
            return scale * std::sqrt(std::numbers::pi) * std::exp(-0.25 * scale * scale * z * z);
        };
        return m;
    }

    /// R(tau) = exp(-|tau|/scale), R_hat(z) = 2 scale / (1 + scale^2 z^2).
    static CovarianceModel exponential(double scale = 1.0) {
        check_scale(scale);
        CovarianceModel m;
        m.kind_ = CovarianceKind::Exponential;
        m.scale_ = scale;
        m.name_ = "exponential";
        m.stationary_ = [scale](double tau) { return std::exp(-std::abs(tau) / scale); };
        m.spectral_ = [scale](double z) { return 2.0 * scale / (1.0 + scale * scale * z * z); };
        return m;
    }

    static CovarianceModel custom(std::string name, Kernel kernel) {
        CovarianceModel m;
        m.kind_ = CovarianceKind::Custom;
        m.name_ = std::move(name);
        m.kernel_ = std::move(kernel);
        return m;
    }

    static CovarianceModel custom_stationary(std::string name, Stationary r,
                                             std::optional<Stationary> spectral = std::nullopt) {
        CovarianceModel m;
        m.kind_ = CovarianceKind::Custom;
        m.name_ = std::move(name);
        m.stationary_ = std::move(r);
        if (spectral) m.spectral_ = std::move(*spectral);
        return m;
    }

    /// R identically zero; a stationary model with zero spectral density.
    static CovarianceModel zero() {
        return custom_stationary("zero", [](double) { return 0.0; }, Stationary([](double) { return 0.0; }));
    }

    CovarianceKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double scale() const { return scale_; }
    bool is_stationary() const { return static_cast<bool>(stationary_); }
    bool has_spectral_density() const { return static_cast<bool>(spectral_); }

    double operator()(double t, double s) const { return stationary_ ? stationary_(t - s) : kernel_(t, s); }

    double stationary(double tau) const {
        if (!stationary_) throw Error(ErrorKind::InvalidArgument, name_ + " is not stationary");
        return stationary_(tau);
    }

    double spectral_density(double z) const {
        if (!spectral_) throw Error(ErrorKind::SpectralUnavailable, name_ + " has no spectral density");
        return spectral_(z);
    }

    /// int |R_hat(z)| |z|^kappa dz over the real line; +inf when it diverges.
    double kappa_moment(double kappa) const {
        if (!spectral_) throw Error(ErrorKind::SpectralUnavailable, name_ + " has no spectral density");
        auto f = [this, kappa](double z) { return std::abs(spectral_(z)) * std::pow(z, kappa); };
        return 2.0 * integrate_half_line(f, 1e-12);
    }

    /// (1/2pi) int R_hat(z) e^{iz tau} dz, the covariance recovered from the spectral density.
    double inverse_spectral(double tau) const {
        if (!spectral_) throw Error(ErrorKind::SpectralUnavailable, name_ + " has no spectral density");
        auto f = [this, tau](double z) { return spectral_(z) * std::cos(z * tau); };
        return integrate_half_line(f, 1e-13) / std::numbers::pi;
    }

private:
    static void check_scale(double scale) {
        if (!(scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "covariance scale must be positive");
    }

    CovarianceKind kind_ = CovarianceKind::Custom;
    std::string name_;
    double scale_ = 1.0;
    Kernel kernel_;
    Stationary stationary_;
    Stationary spectral_;
};

}  // namespace wavegp
