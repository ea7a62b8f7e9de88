// Discretization of the momentum torus [-pi,pi)^3: symmetric tensor grids
// with normalized weights, the lattice dispersion, quadrature, and the Bose
// integral J(T) with its inverse.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bbh/math_util.hpp"

namespace bbh {

struct BracketFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// eps(p) = 4 sum_k sin^2(p_k/2) = 2 sum_k (1 - cos p_k), range [0, 12].
inline double dispersion(const std::array<double, 3>& p) {
    double e = 0.0;
    for (double c : p) {
        const double s = std::sin(0.5 * c);
        e += 4.0 * s * s;
    }
    return e;
}

// Uniform tensor grid on [-pi,pi)^3 with weights 1/n^3.
//
// Even n uses the half-step (midpoint) shift; for odd n the half-step lattice
// would contain the origin (where the Bose integrand is singular), so the
// aligned lattice is used instead. Both choices are closed under p -> -p and
// exclude (0,0,0) for every n >= 2.
class TorusGrid {
public:
    explicit TorusGrid(int n) : n_(n) {
        if (n < 2) throw std::invalid_argument("TorusGrid: n must be >= 2, got " + std::to_string(n));
        const double h = 2.0 * std::numbers::pi / n;
        axis_.resize(static_cast<std::size_t>(n));
        const double shift = (n % 2 == 0) ? 0.5 : 0.0;
        for (int j = 0; j < n; ++j) {
            axis_[static_cast<std::size_t>(j)] = -std::numbers::pi + (j + shift) * h;
        }
        const std::size_t nn = static_cast<std::size_t>(n);
        std::vector<double> eps1(nn);
        for (std::size_t j = 0; j < nn; ++j) eps1[j] = 2.0 * (1.0 - std::cos(axis_[j]));
        eps_.resize(nn * nn * nn);
        min_eps_ = 12.0;
        std::size_t i = 0;
        for (std::size_t j1 = 0; j1 < nn; ++j1)
            for (std::size_t j2 = 0; j2 < nn; ++j2)
                for (std::size_t j3 = 0; j3 < nn; ++j3, ++i) {
                    eps_[i] = eps1[j1] + eps1[j2] + eps1[j3];
                    if (eps_[i] < min_eps_) min_eps_ = eps_[i];
                }
    }

    int n_per_axis() const { return n_; }
    std::size_t size() const { return eps_.size(); }
    double weight() const { return 1.0 / static_cast<double>(size()); }

    // Point index is lexicographic over (j1, j2, j3), j3 fastest.
    std::array<double, 3> point(std::size_t i) const {
        const std::size_t n = static_cast<std::size_t>(n_);
        return {axis_[i / (n * n)], axis_[(i / n) % n], axis_[i % n]};
    }

    double dispersion_at(std::size_t i) const { return eps_[i]; }
    std::span<const double> dispersions() const { return eps_; }
    double min_dispersion() const { return min_eps_; }
    std::span<const double> axis() const { return axis_; }

    // Integral of f(i) against the normalized measure.
    template <class F>
    double integrate_fn(F&& f) const {
        KahanSum acc;
        for (std::size_t i = 0; i < size(); ++i) acc.add(f(i));
        return acc.value() * weight();
    }

private:
    int n_;
    std::vector<double> axis_;
    std::vector<double> eps_;
    double min_eps_;
};

inline TorusGrid make_grid(int n) { return TorusGrid(n); }

// Real scalar function sampled on a grid. The grid must outlive the field.
class ScalarField {
public:
    explicit ScalarField(const TorusGrid& grid, double fill = 0.0)
        : grid_(&grid), values_(grid.size(), fill) {}
    ScalarField(const TorusGrid& grid, std::vector<double> values)
        : grid_(&grid), values_(std::move(values)) {
        if (values_.size() != grid.size())
            throw std::invalid_argument("ScalarField: value count does not match grid");
    }

    const TorusGrid& grid() const { return *grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }

private:
    const TorusGrid* grid_;
    std::vector<double> values_;
};

inline double integrate(const ScalarField& field) {
    return field.grid().weight() * kahan_total(field.values());
}

// J(T) = integral of (e^(eps(p)/T) - 1)^(-1), strictly increasing in T.
inline double bose_integral(double temperature, const TorusGrid& grid) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("bose_integral: temperature must be > 0");
    return grid.integrate_fn(
        [&](std::size_t i) { return bose_occupancy(grid.dispersion_at(i) / temperature); });
}

struct InversionOptions {
    double tolerance = 1e-10;       // absolute, in T
    double max_temperature = 1e12;  // bracket expansion cap
};

// Solve J(T) = target by geometric bracket expansion plus bisection.
inline double invert_bose_integral(double target, const TorusGrid& grid,
                                   const InversionOptions& opts = {}) {
    if (!(target > 0.0))
        throw std::invalid_argument("invert_bose_integral: target must be > 0");
    double hi = 1.0;
    while (bose_integral(hi, grid) < target) {
        hi *= 2.0;
        if (hi > opts.max_temperature)
            throw BracketFailure("invert_bose_integral: no T <= " +
                                 std::to_string(opts.max_temperature) + " reaches target");
    }
    double lo = hi;
    while (bose_integral(lo, grid) > target) {
        lo *= 0.5;
        if (lo < 1e-300) return 0.0;  // target below machine-resolvable J
    }
    while (hi - lo > opts.tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (bose_integral(mid, grid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace bbh
