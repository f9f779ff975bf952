#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <exception>
#include <memory>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "wavegp/covariance.hpp"
#include "wavegp/error.hpp"
#include "wavegp/grid.hpp"
#include "wavegp/io.hpp"
#include "wavegp/rng.hpp"

namespace wavegp {

/// One sample path on a uniform grid.
struct GPRealization {
    UniformGrid grid;
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::string model;
};

/// Runs body(i) for i in [0, count) on `threads` workers (0 = hardware concurrency).
/// Each index is handled exactly once; results must go to pre-assigned slots.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count && !failed; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

/// Zero-mean Gaussian vectors with covariance R(t_i, t_j) through a lower-triangular factor
/// computed once. Diagonal jitter starts at 1e-12 * max R(t,t) and grows by 10x up to 1e-6.
class GaussianSampler {
public:
    GaussianSampler(CovarianceModel model, UniformGrid grid) : model_(std::move(model)), grid_(grid) {
        const auto n = static_cast<Eigen::Index>(grid_.size());
        if (n < 2) throw Error(ErrorKind::InvalidArgument, "sample grid needs at least two points");
        Eigen::MatrixXd cov(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j <= i; ++j) cov(i, j) = cov(j, i) = model_(grid_[i], grid_[j]);
        const double diag = cov.diagonal().maxCoeff();
        if (diag < 0.0) throw Error(ErrorKind::NotPositiveDefinite, "negative variance in " + model_.name());
        if (diag == 0.0) {
            if (cov.cwiseAbs().maxCoeff() != 0.0)
                throw Error(ErrorKind::NotPositiveDefinite, "zero variance with nonzero covariance");
            factor_ = Eigen::MatrixXd::Zero(n, n);
            return;
        }
        for (double rel = 1e-12; rel <= 1e-6 * 1.0001; rel *= 10.0) {
            Eigen::MatrixXd a = cov;
            a.diagonal().array() += rel * diag;
            Eigen::LLT<Eigen::MatrixXd> llt(a);
            if (llt.info() == Eigen::Success) {
                factor_ = llt.matrixL();
                jitter_ = rel * diag;
                return;
            }
        }
        throw Error(ErrorKind::NotPositiveDefinite,
                    "covariance of " + model_.name() + " not factorisable with jitter up to 1e-6 * R(0,0)");
    }

    const UniformGrid& grid() const { return grid_; }
    const CovarianceModel& model() const { return model_; }
    double jitter() const { return jitter_; }
    const Eigen::MatrixXd& factor() const { return factor_; }

    GPRealization sample(std::uint64_t seed) const {
        const auto n = factor_.rows();
        NormalStream normal(seed);
        Eigen::VectorXd z(n);
        for (Eigen::Index i = 0; i < n; ++i) z(i) = normal();
        const Eigen::VectorXd x = factor_.triangularView<Eigen::Lower>() * z;
        GPRealization r;
        r.grid = grid_;
        r.values.assign(x.data(), x.data() + n);
        r.seed = seed;
        r.model = model_.name();
        return r;
    }

    /// Realisation i uses derive_seed(base_seed, i).
    std::vector<GPRealization> sample_batch(std::uint64_t base_seed, std::size_t count, unsigned threads = 1) const {
        if (count < 1) throw Error(ErrorKind::InvalidArgument, "batch count must be at least 1");
        std::vector<GPRealization> out(count);
        parallel_for(count, threads, [&](std::size_t i) { out[i] = sample(derive_seed(base_seed, i)); });
        return out;
    }

private:
    CovarianceModel model_;
    UniformGrid grid_;
    Eigen::MatrixXd factor_;
    double jitter_ = 0.0;
};

inline GPRealization sample_path(const CovarianceModel& model, const UniformGrid& grid, std::uint64_t seed) {
    return GaussianSampler(model, grid).sample(seed);
}

inline std::vector<GPRealization> sample_batch(const CovarianceModel& model, const UniformGrid& grid,
                                               std::uint64_t base_seed, std::size_t count, unsigned threads = 1) {
    return GaussianSampler(model, grid).sample_batch(base_seed, count, threads);
}

/// CSV with columns t,x.
inline std::string path_csv(const UniformGrid& grid, std::span<const double> values) {
    std::string out = "t,x\n";
    for (std::size_t i = 0; i < grid.size(); ++i) out += format_double(grid[i]) + "," + format_double(values[i]) + "\n";
    return out;
}

inline void write_path_csv(const std::filesystem::path& path, const GPRealization& r) {
    write_text_file(path, path_csv(r.grid, r.values));
}

}  // namespace wavegp
