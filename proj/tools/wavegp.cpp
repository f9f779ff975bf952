// wavegp: wavelet systems, Gaussian path simulation, expansions, convergence bounds and
// Monte Carlo experiments from the command line.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavegp/wavegp.hpp"

namespace {

using namespace wavegp;

struct Overrides {
    std::optional<std::string> family, covariance, variant, envelope, cj_source, cj_method;
    std::optional<int> order, depth, j_max;
    std::optional<double> domain_length, scale, spacing, alpha, gamma, kappa;
    std::optional<std::vector<int>> levels;
    std::optional<std::size_t> replications;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::string> out, config_file, preset_name;
};

void add_config_flags(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--preset", o.preset_name, "Named settings (example2)");
    cmd.add_option("--config", o.config_file, "JSON experiment config");
    cmd.add_option("--family", o.family, "haar | daubechies");
    cmd.add_option("--order", o.order, "Vanishing moments");
    cmd.add_option("--depth", o.depth, "Cascade depth");
    cmd.add_option("--T", o.domain_length, "Domain length");
    cmd.add_option("--covariance", o.covariance, "squared_exponential | exponential | zero");
    cmd.add_option("--scale", o.scale, "Covariance scale");
    cmd.add_option("--spacing", o.spacing, "Path grid spacing");
    cmd.add_option("--levels", o.levels, "Detail levels n to evaluate");
    cmd.add_option("--replications", o.replications, "Monte Carlo replications");
    cmd.add_option("--seed", o.seed, "Base seed");
    cmd.add_option("--alpha", o.alpha, "Bound parameter alpha");
    cmd.add_option("--gamma", o.gamma, "Bound parameter gamma");
    cmd.add_option("--kappa", o.kappa, "Lipschitz order of psi_hat");
    cmd.add_option("--j-max", o.j_max, "Truncation level of the j sums");
    cmd.add_option("--variant", o.variant, "half | literal");
    cmd.add_option("--envelope", o.envelope, "flat | radial");
    cmd.add_option("--cj-source", o.cj_source, "empirical | spectral_bound");
    cmd.add_option("--cj-method", o.cj_method, "spectral | time");
    cmd.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    cmd.add_option("--out", o.out, "Output directory or file");
}

ExperimentConfig resolve(const Overrides& o) {
    ExperimentConfig c = o.preset_name ? preset(*o.preset_name) : ExperimentConfig{};
    if (o.config_file) c = ExperimentConfig::from_json(nlohmann::json::parse(read_text_file(*o.config_file)), c);
    if (o.family) c.family = parse_family(*o.family);
    if (o.order) c.order = *o.order;
    if (o.depth) c.depth = *o.depth;
    if (o.domain_length) c.domain_length = *o.domain_length;
    if (o.covariance) c.covariance.kind = *o.covariance;
    if (o.scale) c.covariance.scale = *o.scale;
    if (o.spacing) c.grid_spacing = *o.spacing;
    if (o.levels) c.levels = *o.levels;
    if (o.replications) c.replications = *o.replications;
    if (o.seed) c.seed = *o.seed;
    if (o.alpha) c.bounds.params.alpha = *o.alpha;
    if (o.gamma) c.bounds.params.gamma = *o.gamma;
    if (o.kappa) c.bounds.params.kappa = *o.kappa;
    if (o.j_max) c.bounds.j_max = *o.j_max;
    if (o.variant) c.bounds.variant = parse_variant(*o.variant);
    if (o.envelope) c.bounds.envelope = parse_envelope_mode(*o.envelope);
    if (o.cj_source) c.bounds.cj_source = parse_cj_source(*o.cj_source);
    if (o.cj_method) c.bounds.cj_method = parse_cj_method(*o.cj_method);
    if (o.threads) c.threads = *o.threads;
    if (o.out) c.output = *o.out;
    c.bounds.domain_length = c.domain_length;
    return c;
}

WaveletSystem system_for(const ExperimentConfig& c) { return cascade_evaluate(build_filter(c.family, c.order), c.depth); }

BoundReport report_for(const ExperimentConfig& c, const WaveletSystem& system) {
    const auto spectrum = fourier_transform_psi(system, c.bounds.u_max, c.bounds.du);
    return compute_bound_report(c.covariance.build(), system, spectrum, c.bounds);
}

int cmd_basis(const ExperimentConfig& c) {
    const auto system = system_for(c);
    const auto env = system.envelope(c.bounds.envelope);
    std::printf("family          %s-%d\n", std::string(to_string(system.filter().family)).c_str(), system.filter().order);
    std::printf("filter length   %zu\n", system.filter().length());
    std::printf("orthonormality  %.3e\n", system.filter().orthonormality_defect());
    std::printf("cascade         depth %d, %d iterations\n", system.depth(), system.cascade_iterations());
    std::printf("phi support     [%g, %g]\n", system.phi_support().lo, system.phi_support().hi);
    std::printf("psi support     [%g, %g]\n", system.psi_support().lo, system.psi_support().hi);
    std::printf("a_hat           %g (shift %g)\n", system.a_hat(), system.psi_shift());
    std::printf("Phi_psi(0)      %.6f\n", env.at_zero());
    std::printf("L_1 (%s)      %.6f\n", std::string(to_string(c.bounds.envelope)).c_str(),
                compute_L_gamma(env, system.a_hat(), 1.0));
    if (!c.output.empty()) write_text_file(c.output, system.to_json().dump() + "\n");
    return 0;
}

int cmd_simulate(const ExperimentConfig& c, std::size_t count) {
    const auto system = system_for(c);
    const Interval ext = extended_domain(system, {0.0, c.domain_length});
    const auto grid = UniformGrid::covering(ext.lo, ext.hi, c.grid_spacing);
    const auto paths = sample_batch(c.covariance.build(), grid, c.seed, count, c.threads);
    const std::filesystem::path dir = c.output.empty() ? "paths" : c.output;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "path_%04zu.csv", i);
        write_path_csv(dir / name, paths[i]);
    }
    std::printf("wrote %zu paths of %zu points to %s\n", paths.size(), grid.size(), dir.string().c_str());
    return 0;
}

int cmd_expand(const ExperimentConfig& c, std::size_t index) {
    const auto system = system_for(c);
    const Interval domain{0.0, c.domain_length};
    const Interval ext = extended_domain(system, domain);
    const auto grid = UniformGrid::covering(ext.lo, ext.hi, c.grid_spacing);
    const int top = std::max(c.max_level(), 1);
    const auto path = sample_path(c.covariance.build(), grid, derive_seed(c.seed, index));
    const auto coeffs = compute_coefficients(path, system, top, domain);
    const auto parts = reconstruct_components(system, coeffs, top, grid);
    const std::filesystem::path dir = c.output.empty() ? "expansion" : c.output;
    write_text_file(dir / "coefficients.json", coeffs.to_json().dump() + "\n");
    write_path_csv(dir / "path.csv", path);
    for (int n : c.levels) {
        const auto xn = parts.approximant(n);
        std::string csv = "t,x_n\n";
        for (std::size_t i = 0; i < grid.size(); ++i) csv += format_double(grid[i]) + "," + format_double(xn[i]) + "\n";
        write_text_file(dir / ("reconstruction_n" + std::to_string(n) + ".csv"), csv);
        std::printf("n=%d sup error on [0, %g]: %.6g\n", n, c.domain_length, sup_error(grid, path.values, xn, domain));
    }
    return 0;
}

int cmd_bounds(const ExperimentConfig& c) {
    const auto report = report_for(c, system_for(c));
    const std::string text = report.to_json().dump(2) + "\n";
    if (c.output.empty())
        std::cout << text;
    else
        write_text_file(c.output, text);
    return 0;
}

int cmd_check(const ExperimentConfig& c) {
    const auto system = system_for(c);
    const auto spectrum = fourier_transform_psi(system, c.bounds.u_max, c.bounds.du);
    const auto ci = check_condition_i(spectrum, c.bounds.params.alpha);
    const auto cj = compute_cj_sequence(c.covariance.build(), system, c.bounds, {0.0, c.domain_length});
    const auto cii = check_condition_ii(cj, c.bounds.params.alpha);
    bool entropy_ok = false;
    std::string entropy_note;
    try {
        const double R = compute_R_alpha(spectrum, c.bounds.params.alpha).value();
        const double Lg = compute_L_gamma(system.envelope(c.bounds.envelope), system.a_hat(), c.bounds.params.gamma);
        const double C = compute_C(cj, c.bounds.params, Lg, R);
        if (C > 0.0) {
            const Sigma sigma = Sigma::logarithmic(C, c.bounds.params.alpha, c.bounds.params.beta());
            const auto e = check_entropy_condition(sigma, C / std::pow(c.bounds.params.alpha, c.bounds.params.beta()));
            entropy_ok = e.holds;
            entropy_note = "integral " + format_double(e.integral_value);
        } else {
            entropy_ok = true;
            entropy_note = "C = 0";
        }
    } catch (const Error& e) {
        entropy_note = e.what();
    }
    std::printf("%-28s %-5s %s\n", "condition", "pass", "detail");
    std::printf("%-28s %-5s integral %.6g, tail %.3g, decay exponent %.3f\n", "(i) log-moment of psi_hat",
                ci.holds_numerically ? "yes" : "no", ci.truncated, ci.tail, ci.tail_exponent);
    std::printf("%-28s %-5s sum %.6g, term ratio %.3g\n", "(ii) sum sqrt(c_j) 2^{j/2} j^a",
                cii.converged ? "yes" : "no", cii.partial_sums.back(), cii.ratio);
    std::printf("%-28s %-5s %s\n", "(8) entropy integral", entropy_ok ? "yes" : "no", entropy_note.c_str());
    return ci.holds_numerically && cii.converged && entropy_ok ? 0 : 1;
}

int cmd_mc(const ExperimentConfig& c) {
    ExperimentConfig cfg = c;
    if (cfg.output.empty()) cfg.output = "results";
    const auto r = run_experiment(cfg);
    std::printf("%-4s %-14s %-14s %s\n", "n", "mean_error", "mc_stderr", "count");
    for (const auto& s : r.summary) std::printf("%-4d %-14.6g %-14.3g %zu\n", s.n, s.mean_error, s.mc_stderr, s.count);
    std::size_t vacuous = 0, informative = 0, dominated = 0;
    for (const auto& t : r.tails) {
        if (!t.admissible()) continue;
        (t.vacuous() ? vacuous : informative) += 1;
        dominated += t.dominated ? 1 : 0;
    }
    std::printf("tail rows: %zu vacuous, %zu informative, %zu dominated\n", vacuous, informative, dominated);
    std::printf("results in %s (%.1f s)\n", cfg.output.c_str(), r.wall_seconds);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wavelet expansions of Gaussian processes: simulation, convergence bounds, Monte Carlo checks"};
    app.require_subcommand(1);
    Overrides o;
    std::size_t count = 1;
    std::size_t index = 0;

    auto* basis = app.add_subcommand("basis", "Build a wavelet system and report its constants");
    auto* simulate = app.add_subcommand("simulate", "Write sample paths as CSV");
    auto* expand = app.add_subcommand("expand", "Expand one simulated path and write reconstructions");
    auto* bounds = app.add_subcommand("bounds", "Compute the bound report as JSON");
    auto* check = app.add_subcommand("check", "Pass/fail table for conditions (i), (ii) and (8)");
    auto* mc = app.add_subcommand("mc", "Run the Monte Carlo experiment");
    for (auto* cmd : {basis, simulate, expand, bounds, check, mc}) add_config_flags(*cmd, o);
    simulate->add_option("--count", count, "Number of paths")->check(CLI::PositiveNumber);
    expand->add_option("--index", index, "Replication index whose derived seed is used");

    CLI11_PARSE(app, argc, argv);
    try {
        const ExperimentConfig c = resolve(o);
        if (*basis) return cmd_basis(c);
        if (*simulate) return cmd_simulate(c, count);
        if (*expand) return cmd_expand(c, index);
        if (*bounds) return cmd_bounds(c);
        if (*check) return cmd_check(c);
        if (*mc) return cmd_mc(c);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
