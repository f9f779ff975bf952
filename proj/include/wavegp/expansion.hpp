#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

#include "wavegp/covariance.hpp"
#include "wavegp/error.hpp"
#include "wavegp/gaussian_process.hpp"
#include "wavegp/grid.hpp"
#include "wavegp/io.hpp"
#include "wavegp/wavelet_system.hpp"

namespace wavegp {

/// Coefficients c_k for k = k_min .. k_min + values.size() - 1.
struct LevelCoefficients {
    long k_min = 0;
    std::vector<double> values;

    long k_max() const { return k_min + static_cast<long>(values.size()) - 1; }
    double at(long k) const { return values.at(static_cast<std::size_t>(k - k_min)); }
    friend bool operator==(const LevelCoefficients&, const LevelCoefficients&) = default;
};

/// xi_{0k} (or alpha_{0k}) and eta_{jk} (or beta_{jk}) for j < levels().
struct ExpansionCoefficients {
    LevelCoefficients xi0;
    std::vector<LevelCoefficients> eta;
    Interval domain;

    int levels() const { return static_cast<int>(eta.size()); }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["domain"] = {domain.lo, domain.hi};
        j["smooth"] = {{"k_min", xi0.k_min}, {"k_max", xi0.k_max()}, {"values", xi0.values}};
        j["details"] = nlohmann::json::array();
        for (std::size_t l = 0; l < eta.size(); ++l)
            j["details"].push_back(
                {{"level", l}, {"k_min", eta[l].k_min}, {"k_max", eta[l].k_max()}, {"values", eta[l].values}});
        return j;
    }

    static ExpansionCoefficients from_json(const nlohmann::json& j) {
        ExpansionCoefficients c;
        const auto d = j.at("domain").get<std::vector<double>>();
        c.domain = {d.at(0), d.at(1)};
        c.xi0 = {j.at("smooth").at("k_min").get<long>(), j.at("smooth").at("values").get<std::vector<double>>()};
        for (const auto& lvl : j.at("details"))
            c.eta.push_back({lvl.at("k_min").get<long>(), lvl.at("values").get<std::vector<double>>()});
        return c;
    }
};

/// Translations k whose w_{jk} support meets the closed interval `domain`.
inline std::pair<long, long> translation_range(const WaveletSystem& system, WaveletKind kind, int j,
                                               Interval domain) {
    const Interval s = kind == WaveletKind::Father ? system.phi_support() : system.psi_support();
    const double scale = std::ldexp(1.0, j);
    return {static_cast<long>(std::ceil(scale * domain.lo - s.hi)),
            static_cast<long>(std::floor(scale * domain.hi - s.lo))};
}

/// Interval a path must cover so every coefficient integral over `domain` is computable:
/// domain widened by the widest level-0 support.
inline Interval extended_domain(const WaveletSystem& system, Interval domain) {
    const double m = std::max(system.phi_support().width(), system.psi_support().width());
    return {domain.lo - m, domain.hi + m};
}

/// Values of w_{jk} on a grid for every k in a translation range, trimmed to the support.
class BasisTable {
public:
    struct Entry {
        long k = 0;
        std::size_t first = 0;
        std::vector<double> values;
    };

    BasisTable(const WaveletSystem& system, WaveletKind kind, int j, std::pair<long, long> range,
               const UniformGrid& grid) {
        for (long k = range.first; k <= range.second; ++k) {
            Entry e;
            e.k = k;
            const auto [first, last] = grid.index_range(system.dilated_support(kind, j, k));
            if (first <= last) {
                e.first = static_cast<std::size_t>(first);
                for (auto i = first; i <= last; ++i)
                    e.values.push_back(system.evaluate_dilated(kind, j, k, grid[static_cast<std::size_t>(i)]));
            }
            entries_.push_back(std::move(e));
        }
    }

    const std::vector<Entry>& entries() const { return entries_; }
    long k_min() const { return entries_.empty() ? 0 : entries_.front().k; }

    /// Trapezoid inner products <x, w_{jk}> over the whole grid.
    LevelCoefficients project(const UniformGrid& grid, std::span<const double> x) const {
        LevelCoefficients c;
        c.k_min = k_min();
        c.values.reserve(entries_.size());
        for (const auto& e : entries_) {
            double s = 0.0;
            for (std::size_t i = 0; i < e.values.size(); ++i) s += grid.weight(e.first + i) * x[e.first + i] * e.values[i];
            c.values.push_back(s);
        }
        return c;
    }

    /// out += sum_k c_k w_{jk}
    void accumulate(const LevelCoefficients& c, std::span<double> out) const {
        for (const auto& e : entries_) {
            if (e.k < c.k_min || e.k > c.k_max()) continue;
            const double ck = c.at(e.k);
            if (ck == 0.0) continue;
            for (std::size_t i = 0; i < e.values.size(); ++i) out[e.first + i] += ck * e.values[i];
        }
    }

private:
    std::vector<Entry> entries_;
};

/// Precomputed basis tables for projecting paths on one grid over `domain` up to `levels`
/// detail levels. Reusable across realisations sharing the grid.
class ExpansionPlan {
public:
    ExpansionPlan(const WaveletSystem& system, Interval domain, int levels, const UniformGrid& grid)
        : domain_(domain), levels_(levels), grid_(grid) {
        if (levels < 1) throw Error(ErrorKind::InvalidArgument, "need at least one detail level");
        if (!(domain.hi > domain.lo)) throw Error(ErrorKind::InvalidArgument, "empty expansion domain");
        const double needed = std::ldexp(1.0, -(levels + 2));
        if (grid.step() > needed * (1.0 + 1e-12))
            throw Error(ErrorKind::GridTooCoarse, "path spacing " + format_double(grid.step()) +
                                                      " exceeds 2^-(levels+2) = " + format_double(needed));
        const Interval ext = extended_domain(system, domain);
        if (grid.lo() > ext.lo + 1e-9 || grid.hi() < ext.hi - 1e-9)
            throw Error(ErrorKind::InvalidArgument, "path grid [" + format_double(grid.lo()) + ", " +
                                                        format_double(grid.hi()) + "] does not cover [" +
                                                        format_double(ext.lo) + ", " + format_double(ext.hi) + "]");
        smooth_.emplace_back(system, WaveletKind::Father, 0,
                             translation_range(system, WaveletKind::Father, 0, domain), grid);
        for (int j = 0; j < levels; ++j)
            details_.emplace_back(system, WaveletKind::Mother, j,
                                  translation_range(system, WaveletKind::Mother, j, domain), grid);
    }

    const UniformGrid& grid() const { return grid_; }
    Interval domain() const { return domain_; }
    int levels() const { return levels_; }

    ExpansionCoefficients project(std::span<const double> x) const {
        if (x.size() != grid_.size()) throw Error(ErrorKind::InvalidArgument, "path length does not match grid");
        ExpansionCoefficients c;
        c.domain = domain_;
        c.xi0 = smooth_.front().project(grid_, x);
        for (const auto& t : details_) c.eta.push_back(t.project(grid_, x));
        return c;
    }

private:
    Interval domain_;
    int levels_;
    UniformGrid grid_;
    std::vector<BasisTable> smooth_;
    std::vector<BasisTable> details_;
};

/// xi_{0k} = trapezoid(X phi_{0k}), eta_{jk} = trapezoid(X psi_{jk}) for j < n_levels and all k
/// whose supports meet `domain`.
inline ExpansionCoefficients compute_coefficients(const GPRealization& path, const WaveletSystem& system,
                                                  int n_levels, Interval domain) {
    return ExpansionPlan(system, domain, n_levels, path.grid).project(path.values);
}

/// Smooth part and per-level detail sums of an expansion evaluated on a grid.
struct Reconstruction {
    std::vector<double> smooth;
    std::vector<std::vector<double>> details;

    /// X_n = smooth + details[0] + ... + details[n-1], summed in that order.
    std::vector<double> approximant(int n) const {
        if (n < 0 || n > static_cast<int>(details.size()))
            throw Error(ErrorKind::InvalidArgument, "approximant order outside available levels");
        std::vector<double> out = smooth;
        for (int j = 0; j < n; ++j)
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += details[static_cast<std::size_t>(j)][i];
        return out;
    }
};

/// Basis tables for evaluating expansions on one grid; reusable across coefficient sets.
class Synthesizer {
public:
    Synthesizer(const WaveletSystem& system, int levels, const UniformGrid& grid) : grid_(grid) {
        // Every translation with a nonzero value somewhere on the grid.
        const Interval span{grid.lo(), grid.hi()};
        smooth_.emplace_back(system, WaveletKind::Father, 0, translation_range(system, WaveletKind::Father, 0, span),
                             grid);
        for (int j = 0; j < levels; ++j)
            details_.emplace_back(system, WaveletKind::Mother, j,
                                  translation_range(system, WaveletKind::Mother, j, span), grid);
    }

    int levels() const { return static_cast<int>(details_.size()); }
    const UniformGrid& grid() const { return grid_; }

    Reconstruction components(const ExpansionCoefficients& coeffs, int n) const {
        if (n < 0 || n > coeffs.levels() || n > levels())
            throw Error(ErrorKind::InvalidArgument, "requested " + std::to_string(n) + " levels, have " +
                                                        std::to_string(std::min(coeffs.levels(), levels())));
        Reconstruction r;
        r.smooth.assign(grid_.size(), 0.0);
        smooth_.front().accumulate(coeffs.xi0, r.smooth);
        for (int j = 0; j < n; ++j) {
            std::vector<double> d(grid_.size(), 0.0);
            details_[static_cast<std::size_t>(j)].accumulate(coeffs.eta[static_cast<std::size_t>(j)], d);
            r.details.push_back(std::move(d));
        }
        return r;
    }

private:
    UniformGrid grid_;
    std::vector<BasisTable> smooth_;
    std::vector<BasisTable> details_;
};

inline Reconstruction reconstruct_components(const WaveletSystem& system, const ExpansionCoefficients& coeffs,
                                             int n, const UniformGrid& grid) {
    return Synthesizer(system, std::clamp(n, 0, coeffs.levels()), grid).components(coeffs, n);
}

/// X_n(t) = sum_k xi_{0k} phi_{0k}(t) + sum_{j<n} sum_k eta_{jk} psi_{jk}(t) on the grid.
inline std::vector<double> reconstruct(const WaveletSystem& system, const ExpansionCoefficients& coeffs, int n,
                                       const UniformGrid& grid) {
    return reconstruct_components(system, coeffs, n, grid).approximant(n);
}

/// Largest |x_i - approx_i| over grid points inside `window`.
inline double sup_error(const UniformGrid& grid, std::span<const double> x, std::span<const double> approx,
                        Interval window) {
    if (x.size() != grid.size() || approx.size() != grid.size())
        throw Error(ErrorKind::InvalidArgument, "path and approximation lengths differ");
    const auto [first, last] = grid.index_range(window);
    if (first > last) throw Error(ErrorKind::EmptyWindow, "no grid points in the window");
    double m = 0.0;
    for (auto i = first; i <= last; ++i)
        m = std::max(m, std::abs(x[static_cast<std::size_t>(i)] - approx[static_cast<std::size_t>(i)]));
    return m;
}

/// Subgrid of `grid` made of the points inside `window`.
inline std::pair<UniformGrid, std::size_t> subgrid(const UniformGrid& grid, Interval window) {
    const auto [first, last] = grid.index_range(window);
    if (first > last) throw Error(ErrorKind::EmptyWindow, "no grid points in the window");
    return {UniformGrid(grid[static_cast<std::size_t>(first)], grid.step(), static_cast<std::size_t>(last - first + 1)),
            static_cast<std::size_t>(first)};
}

struct DeterministicExpansion {
    ExpansionCoefficients coefficients;
    UniformGrid grid;             ///< points of the sampling grid inside the domain
    std::vector<double> samples;  ///< f on `grid`
    Reconstruction reconstruction;
};

/// alpha_{0k}, beta_{jk} of f by trapezoid on a grid of the given spacing covering the extended
/// domain, and the partial sums f_n on the domain part of that grid.
inline DeterministicExpansion deterministic_expand(const std::function<double(double)>& f,
                                                   const WaveletSystem& system, int n_levels, Interval domain,
                                                   double spacing) {
    const Interval ext = extended_domain(system, domain);
    const auto full = UniformGrid::covering(ext.lo, ext.hi, spacing);
    std::vector<double> x(full.size());
    for (std::size_t i = 0; i < full.size(); ++i) x[i] = f(full[i]);
    DeterministicExpansion out;
    out.coefficients = ExpansionPlan(system, domain, n_levels, full).project(x);
    auto [inner, offset] = subgrid(full, domain);
    out.grid = inner;
    out.samples.assign(x.begin() + static_cast<std::ptrdiff_t>(offset),
                       x.begin() + static_cast<std::ptrdiff_t>(offset + inner.size()));
    out.reconstruction = reconstruct_components(system, out.coefficients, n_levels, inner);
    return out;
}

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Monte Carlo estimate of E|X_n(t) - X(t)|^2: paths simulated on [t - 1/2, t + 1/2] widened
/// by the basis support, at spacing 2^-(n+3) with t on the grid.
inline MonteCarloEstimate pointwise_ms_error(const CovarianceModel& model, const WaveletSystem& system, double t,
                                             int n, std::size_t n_seeds, std::uint64_t base_seed = 1) {
    if (n_seeds < 2) throw Error(ErrorKind::InvalidArgument, "need at least two seeds");
    const int levels = std::max(n, 1);
    const double h = std::ldexp(1.0, -(levels + 3));
    const Interval domain{t - 0.5, t + 0.5};
    const Interval ext = extended_domain(system, domain);
    const auto grid = UniformGrid::covering(ext.lo, ext.hi, h);
    const GaussianSampler sampler(model, grid);
    const ExpansionPlan plan(system, domain, levels, grid);
    const UniformGrid point(t, h, 1);
    const std::size_t centre = static_cast<std::size_t>(std::llround((t - grid.lo()) / h));

    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t s = 0; s < n_seeds; ++s) {
        const auto path = sampler.sample(derive_seed(base_seed, s));
        const auto coeffs = plan.project(path.values);
        const double xn = reconstruct(system, coeffs, n, point).front();
        const double e = (xn - path.values[centre]) * (xn - path.values[centre]);
        sum += e;
        sum_sq += e * e;
    }
    const double count = static_cast<double>(n_seeds);
    MonteCarloEstimate est;
    est.mean = sum / count;
    est.std_error = std::sqrt(std::max(0.0, sum_sq / count - est.mean * est.mean) / (count - 1.0));
    est.samples = n_seeds;
    return est;
}

}  // namespace wavegp
