#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "wavegp/error.hpp"

namespace wavegp {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool contains(const Interval& other) const { return other.lo >= lo && other.hi <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Equispaced points lo, lo + step, ..., lo + (size - 1) * step.
class UniformGrid {
public:
    UniformGrid() = default;
    UniformGrid(double lo, double step, std::size_t size) : lo_(lo), step_(step), size_(size) {
        if (!(step > 0.0) || size < 1)
            throw Error(ErrorKind::InvalidArgument, "grid needs a positive step and at least one point");
    }

    /// Smallest grid with the given step whose points start at `lo` and reach `hi`.
    static UniformGrid covering(double lo, double hi, double step) {
        if (!(hi >= lo)) throw Error(ErrorKind::InvalidArgument, "grid bounds reversed");
        const auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
        return UniformGrid(lo, step, intervals + 1);
    }

    double lo() const { return lo_; }
    double hi() const { return lo_ + step_ * static_cast<double>(size_ - 1); }
    double step() const { return step_; }
    std::size_t size() const { return size_; }
    double operator[](std::size_t i) const { return lo_ + step_ * static_cast<double>(i); }

    std::vector<double> points() const {
        std::vector<double> out(size_);
        for (std::size_t i = 0; i < size_; ++i) out[i] = (*this)[i];
        return out;
    }

    /// Index range [first, last] of grid points inside the closed interval; first > last when empty.
    std::pair<std::ptrdiff_t, std::ptrdiff_t> index_range(const Interval& iv) const {
        auto first = static_cast<std::ptrdiff_t>(std::ceil((iv.lo - lo_) / step_ - 1e-9));
        auto last = static_cast<std::ptrdiff_t>(std::floor((iv.hi - lo_) / step_ + 1e-9));
        if (first < 0) first = 0;
        if (last > static_cast<std::ptrdiff_t>(size_) - 1) last = static_cast<std::ptrdiff_t>(size_) - 1;
        return {first, last};
    }

    /// Trapezoid weight of point i for integration over the whole grid.
    double weight(std::size_t i) const {
        if (size_ == 1) return 0.0;
        return (i == 0 || i + 1 == size_) ? 0.5 * step_ : step_;
    }

    friend bool operator==(const UniformGrid&, const UniformGrid&) = default;

private:
    double lo_ = 0.0;
    double step_ = 1.0;
    std::size_t size_ = 1;
};

/// Composite trapezoid rule for samples at spacing `step`.
inline double trapezoid(std::span<const double> values, double step) {
    if (values.size() < 2) return 0.0;
    double sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
    return sum * step;
}

}  // namespace wavegp
