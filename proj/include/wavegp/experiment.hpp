#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavegp/bounds.hpp"
#include "wavegp/covariance.hpp"
#include "wavegp/error.hpp"
#include "wavegp/expansion.hpp"
#include "wavegp/filter.hpp"
#include "wavegp/fourier.hpp"
#include "wavegp/gaussian_process.hpp"
#include "wavegp/io.hpp"
#include "wavegp/wavelet_system.hpp"

namespace wavegp {

struct CovarianceSpec {
    std::string kind = "squared_exponential";
    double scale = 1.0;

    CovarianceModel build() const {
        if (kind == "squared_exponential") return CovarianceModel::squared_exponential(scale);
        if (kind == "exponential") return CovarianceModel::exponential(scale);
        if (kind == "zero") return CovarianceModel::zero();
        throw Error(ErrorKind::InvalidArgument, "unknown covariance kind '" + kind + "'");
    }
};

/// Defaults reproduce the D8 / e^{-t^2} / T = 30 / 500-path setting.
struct ExperimentConfig {
    Family family = Family::Daubechies;
    int order = 4;
    int depth = 12;
    double domain_length = 30.0;
    CovarianceSpec covariance;
    double grid_spacing = 1.0 / 64.0;
    std::vector<int> levels{1, 2, 3};
    std::size_t replications = 500;
    std::uint64_t seed = 42;
    BoundOptions bounds;
    unsigned threads = 0;
    std::string output;

    static ExperimentConfig example2() { return {}; }

    int max_level() const { return levels.empty() ? 0 : *std::max_element(levels.begin(), levels.end()); }

    void validate() const {
        if (replications < 1) throw Error(ErrorKind::InvalidArgument, "replications must be at least 1");
        if (levels.empty()) throw Error(ErrorKind::InvalidArgument, "no levels requested");
        for (int n : levels)
            if (n < 0) throw Error(ErrorKind::InvalidArgument, "levels must be nonnegative");
        if (!(domain_length > 0.0)) throw Error(ErrorKind::InvalidArgument, "domain length must be positive");
        if (!(grid_spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");
        const double needed = std::ldexp(1.0, -(std::max(max_level(), 1) + 2));
        if (grid_spacing > needed * (1.0 + 1e-12))
            throw Error(ErrorKind::GridTooCoarse, "grid spacing " + format_double(grid_spacing) +
                                                      " does not resolve level " + std::to_string(max_level()));
        if (max_level() > bounds.j_max)
            throw Error(ErrorKind::InvalidArgument, "largest level exceeds bounds.j_max");
        bounds.params.validate();
    }

    nlohmann::json to_json() const {
        auto b = bound_options_json(bounds);
        b.erase("domain_length");
        b.erase("beta");
        return {{"wavelet", {{"family", to_string(family)}, {"order", order}, {"depth", depth}}},
                {"domain_length", domain_length},
                {"covariance", {{"kind", covariance.kind}, {"scale", covariance.scale}}},
                {"grid_spacing", grid_spacing},
                {"levels", levels},
                {"replications", replications},
                {"seed", seed},
                {"bounds", b},
                {"threads", threads},
                {"output", output}};
    }

    static ExperimentConfig from_json(const nlohmann::json& j) { return from_json(j, ExperimentConfig{}); }

    /// Fields absent from `j` keep the values already in `base`.
    static ExperimentConfig from_json(const nlohmann::json& j, ExperimentConfig base) {
        ExperimentConfig c = std::move(base);
        if (j.contains("wavelet")) {
            const auto& w = j.at("wavelet");
            if (w.contains("family")) c.family = parse_family(w.at("family").get<std::string>());
            c.order = w.value("order", c.order);
            c.depth = w.value("depth", c.depth);
        }
        c.domain_length = j.value("domain_length", c.domain_length);
        if (j.contains("covariance")) {
            c.covariance.kind = j.at("covariance").value("kind", c.covariance.kind);
            c.covariance.scale = j.at("covariance").value("scale", c.covariance.scale);
        }
        c.grid_spacing = j.value("grid_spacing", c.grid_spacing);
        if (j.contains("levels")) c.levels = j.at("levels").get<std::vector<int>>();
        c.replications = j.value("replications", c.replications);
        c.seed = j.value("seed", c.seed);
        if (j.contains("bounds")) c.bounds = bound_options_from_json(j.at("bounds"), c.bounds);
        c.threads = j.value("threads", c.threads);
        c.output = j.value("output", c.output);
        c.bounds.domain_length = c.domain_length;
        return c;
    }
};

inline ExperimentConfig preset(std::string_view name) {
    if (name == "example2") return ExperimentConfig::example2();
    throw Error(ErrorKind::InvalidArgument, "unknown preset '" + std::string(name) + "'");
}

struct ErrorRow {
    std::size_t replication = 0;
    int n = 0;
    double sup_error = 0.0;
    friend bool operator==(const ErrorRow&, const ErrorRow&) = default;
};

struct SummaryRow {
    int n = 0;
    double mean_error = 0.0;
    double mc_stderr = 0.0;
    std::size_t count = 0;
    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

/// One u of a tail comparison. bound is NaN when u is at or below 8 delta (no bound applies).
struct TailRow {
    int n = 0;
    double u = 0.0;
    double empirical = 0.0;
    double margin = 0.0;
    double bound = 0.0;
    bool dominated = false;

    bool admissible() const { return !std::isnan(bound); }
    bool vacuous() const { return admissible() && bound >= 1.0; }

    friend bool operator==(const TailRow& a, const TailRow& b) {
        const bool same_bound = a.bound == b.bound || (std::isnan(a.bound) && std::isnan(b.bound));
        return a.n == b.n && a.u == b.u && a.empirical == b.empirical && a.margin == b.margin && same_bound &&
               a.dominated == b.dominated;
    }
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ErrorRow> errors;
    std::vector<SummaryRow> summary;
    std::vector<TailRow> tails;
    std::optional<BoundReport> bounds;
    double wall_seconds = 0.0;

    std::vector<double> errors_for(int n) const {
        std::vector<double> out;
        for (const auto& e : errors)
            if (e.n == n) out.push_back(e.sup_error);
        return out;
    }

    const SummaryRow& summary_for(int n) const {
        for (const auto& s : summary)
            if (s.n == n) return s;
        throw Error(ErrorKind::InvalidArgument, "no summary for n = " + std::to_string(n));
    }
};

/// Mean and Monte Carlo standard error per n, in order of first appearance.
inline std::vector<SummaryRow> summarize(const std::vector<ErrorRow>& errors) {
    std::vector<SummaryRow> out;
    std::vector<double> sum_sq;
    for (const auto& e : errors) {
        auto it = std::find_if(out.begin(), out.end(), [&](const SummaryRow& s) { return s.n == e.n; });
        if (it == out.end()) {
            out.push_back({e.n, 0.0, 0.0, 0});
            sum_sq.push_back(0.0);
            it = out.end() - 1;
        }
        it->mean_error += e.sup_error;
        ++it->count;
    }
    for (auto& s : out) s.mean_error /= static_cast<double>(s.count);
    for (const auto& e : errors) {
        const auto i = static_cast<std::size_t>(
            std::find_if(out.begin(), out.end(), [&](const SummaryRow& s) { return s.n == e.n; }) - out.begin());
        const double d = e.sup_error - out[i].mean_error;
        sum_sq[i] += d * d;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double c = static_cast<double>(out[i].count);
        out[i].mc_stderr = out[i].count > 1 ? std::sqrt(sum_sq[i] / (c - 1.0) / c) : 0.0;
    }
    return out;
}

/// 20 log-spaced points from 8 delta * 1.01 to 1.5 * the largest observed error
/// (upper end doubled from the lower one when that range is empty).
inline std::vector<double> default_u_grid(double threshold, double max_error, std::size_t points = 20) {
    const double lo = std::max(threshold * 1.01, 1e-12);
    double hi = 1.5 * max_error;
    if (!(hi > lo)) hi = 2.0 * lo;
    std::vector<double> u(points);
    for (std::size_t i = 0; i < points; ++i)
        u[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(points - 1));
    return u;
}

/// Empirical P{sup error > u} with a 3-standard-error margin against the tail bound at level n.
inline std::vector<TailRow> compare_tail(const std::vector<double>& errors, const BoundReport& report, int n,
                                         const std::vector<double>& u_grid) {
    std::vector<TailRow> rows;
    const double count = static_cast<double>(errors.size());
    for (double u : u_grid) {
        TailRow r;
        r.n = n;
        r.u = u;
        const auto above = std::count_if(errors.begin(), errors.end(), [&](double e) { return e > u; });
        r.empirical = count > 0 ? static_cast<double>(above) / count : 0.0;
        r.margin = count > 0 ? 3.0 * std::sqrt(r.empirical * (1.0 - r.empirical) / count) : 0.0;
        try {
            r.bound = report.tail(u, n);
            // Both sides capped at 1: a probability bound at or above 1 is dominated by any frequency.
            r.dominated = std::min(r.empirical + r.margin, 1.0) <= std::min(r.bound, 1.0);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ThresholdNotExceeded) throw;
            r.bound = std::numeric_limits<double>::quiet_NaN();
            r.dominated = false;
        }
        rows.push_back(r);
    }
    return rows;
}

inline std::vector<TailRow> compare_tail(const ExperimentResult& result, const BoundReport& report, int n,
                                         const std::vector<double>& u_grid) {
    return compare_tail(result.errors_for(n), report, n, u_grid);
}

inline std::string errors_csv(const std::vector<ErrorRow>& rows) {
    std::string out = "replication,n,sup_error\n";
    for (const auto& r : rows)
        out += std::to_string(r.replication) + "," + std::to_string(r.n) + "," + format_double(r.sup_error) + "\n";
    return out;
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::string out = "n,mean_error,mc_stderr,count\n";
    for (const auto& r : rows)
        out += std::to_string(r.n) + "," + format_double(r.mean_error) + "," + format_double(r.mc_stderr) + "," +
               std::to_string(r.count) + "\n";
    return out;
}

inline std::string tails_csv(const std::vector<TailRow>& rows) {
    std::string out = "n,u,empirical,margin,bound,dominated\n";
    for (const auto& r : rows)
        out += std::to_string(r.n) + "," + format_double(r.u) + "," + format_double(r.empirical) + "," +
               format_double(r.margin) + "," + format_double(r.bound) + "," + (r.dominated ? "1" : "0") + "\n";
    return out;
}

/// Writes errors.csv, summary.csv, tails.csv, config.json, bounds.json (when present) and
/// meta.json (wall clock) into `dir`.
inline void emit(const ExperimentResult& r, const std::filesystem::path& dir) {
    write_text_file(dir / "errors.csv", errors_csv(r.errors));
    write_text_file(dir / "summary.csv", summary_csv(r.summary));
    write_text_file(dir / "tails.csv", tails_csv(r.tails));
    write_text_file(dir / "config.json", r.config.to_json().dump(2) + "\n");
    if (r.bounds) write_text_file(dir / "bounds.json", r.bounds->to_json().dump(2) + "\n");
    write_text_file(dir / "meta.json", nlohmann::json{{"wall_seconds", r.wall_seconds}}.dump(2) + "\n");
}

inline ExperimentResult load_result(const std::filesystem::path& dir) {
    ExperimentResult r;
    r.config = ExperimentConfig::from_json(nlohmann::json::parse(read_text_file(dir / "config.json")));
    auto to_size = [](const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); };
    for (const auto& f : read_csv_rows(dir / "errors.csv", "replication,n,sup_error"))
        r.errors.push_back({to_size(f.at(0)), std::stoi(f.at(1)), parse_double(f.at(2))});
    for (const auto& f : read_csv_rows(dir / "summary.csv", "n,mean_error,mc_stderr,count"))
        r.summary.push_back({std::stoi(f.at(0)), parse_double(f.at(1)), parse_double(f.at(2)), to_size(f.at(3))});
    for (const auto& f : read_csv_rows(dir / "tails.csv", "n,u,empirical,margin,bound,dominated"))
        r.tails.push_back({std::stoi(f.at(0)), parse_double(f.at(1)), parse_double(f.at(2)), parse_double(f.at(3)),
                           parse_double(f.at(4)), f.at(5) == "1"});
    if (std::filesystem::exists(dir / "bounds.json"))
        r.bounds = BoundReport::from_json(nlohmann::json::parse(read_text_file(dir / "bounds.json")));
    if (std::filesystem::exists(dir / "meta.json"))
        r.wall_seconds = nlohmann::json::parse(read_text_file(dir / "meta.json")).value("wall_seconds", 0.0);
    return r;
}

/// Name of the marker file written next to partial results when a run fails.
inline constexpr const char* failure_marker = "FAILED";

namespace detail {
inline void flush_partial(const ExperimentResult& r, const std::string& message) {
    if (r.config.output.empty()) return;
    const std::filesystem::path dir = r.config.output;
    emit(r, dir);
    write_text_file(dir / failure_marker, message + "\n");
}
}  // namespace detail

/// Simulates every replication on the extended domain, projects once at the largest level,
/// reconstructs each requested n, records the discrete sup error over [0, T], aggregates, and
/// attaches the bound report and tail comparisons. When config.output is set the result is
/// emitted there; on failure whatever was finished is flushed with a FAILED marker.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult result;
    result.config = config;
    result.config.bounds.domain_length = config.domain_length;
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    try {
        config.validate();
        const CovarianceModel model = config.covariance.build();
        const WaveletSystem system = cascade_evaluate(build_filter(config.family, config.order), config.depth);
        const Interval domain{0.0, config.domain_length};
        const Interval ext = extended_domain(system, domain);
        const auto grid = UniformGrid::covering(ext.lo, ext.hi, config.grid_spacing);
        const int top = std::max(config.max_level(), 1);
        const GaussianSampler sampler(model, grid);
        const ExpansionPlan plan(system, domain, top, grid);
        const Synthesizer synth(system, top, grid);

        const std::size_t reps = config.replications;
        const std::size_t per = config.levels.size();
        std::vector<double> errs(reps * per, 0.0);
        std::vector<char> done(reps, 0);
        std::exception_ptr failure;
        try {
            parallel_for(reps, config.threads, [&](std::size_t i) {
                const auto path = sampler.sample(derive_seed(config.seed, i));
                const auto coeffs = plan.project(path.values);
                const auto parts = synth.components(coeffs, top);
                for (std::size_t l = 0; l < per; ++l)
                    errs[i * per + l] = sup_error(grid, path.values, parts.approximant(config.levels[l]), domain);
                done[i] = 1;
            });
        } catch (...) {
            failure = std::current_exception();
        }
        for (std::size_t i = 0; i < reps; ++i)
            if (done[i])
                for (std::size_t l = 0; l < per; ++l) result.errors.push_back({i, config.levels[l], errs[i * per + l]});
        result.summary = summarize(result.errors);
        if (failure) std::rethrow_exception(failure);

        const PsiSpectrum spectrum = fourier_transform_psi(system, config.bounds.u_max, config.bounds.du);
        result.bounds = compute_bound_report(model, system, spectrum, result.config.bounds);
        for (int n : config.levels) {
            if (n < 1) continue;
            const auto e = result.errors_for(n);
            const double max_error = e.empty() ? 0.0 : *std::max_element(e.begin(), e.end());
            const auto rows = compare_tail(e, *result.bounds, n, default_u_grid(result.bounds->threshold(n), max_error));
            result.tails.insert(result.tails.end(), rows.begin(), rows.end());
        }
    } catch (const std::exception& e) {
        result.wall_seconds = elapsed();
        detail::flush_partial(result, e.what());
        throw;
    }
    result.wall_seconds = elapsed();
    if (!config.output.empty()) {
        emit(result, config.output);
        std::error_code ec;
        std::filesystem::remove(std::filesystem::path(config.output) / failure_marker, ec);
    }
    return result;
}

}  // namespace wavegp
