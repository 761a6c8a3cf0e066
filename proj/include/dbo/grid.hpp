#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dbo {

/// Values of an operator at the interior nodes j = 1..N-1 (index 0 holds j = 1).
using InteriorValues = std::vector<double>;

/// Uniform partition of [0,1] into N intervals, h = 1/N, x_j = j/N.
class Grid {
public:
    explicit Grid(std::size_t n_intervals) : n_(n_intervals) {
        if (n_intervals < 2) {
            throw std::invalid_argument("Grid requires N >= 2, got " + std::to_string(n_intervals));
        }
    }

    std::size_t intervals() const noexcept { return n_; }
    std::size_t size() const noexcept { return n_ + 1; }
    std::size_t interior_size() const noexcept { return n_ - 1; }
    double mesh() const noexcept { return 1.0 / static_cast<double>(n_); }

    // j/N rather than j*h: x_N is exactly 1 and x_j is correctly rounded.
    double node(std::size_t j) const noexcept {
        return static_cast<double>(j) / static_cast<double>(n_);
    }

    std::vector<double> nodes() const {
        std::vector<double> x(size());
        for (std::size_t j = 0; j <= n_; ++j) x[j] = node(j);
        return x;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t n_;
};

inline Grid make_grid(std::size_t n_intervals) { return Grid(n_intervals); }

/// Real values v_0..v_N on the nodes of a grid.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) {
            throw std::invalid_argument("GridFunction needs N+1 = " + std::to_string(grid_.size()) +
                                        " values, got " + std::to_string(values_.size()));
        }
    }

    static GridFunction zeros(Grid grid) { return {grid, std::vector<double>(grid.size(), 0.0)}; }

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t j) const { return values_[j]; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Values at j = 1..N-1.
    InteriorValues interior() const { return {values_.begin() + 1, values_.end() - 1}; }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Grid function in l^2_{h,0}: v_0 = v_N = 0 exactly.
class HomogeneousGridFunction : public GridFunction {
public:
    explicit HomogeneousGridFunction(GridFunction gf) : GridFunction(std::move(gf)) {
        if ((*this)[0] != 0.0 || (*this)[size() - 1] != 0.0) {
            throw std::invalid_argument("HomogeneousGridFunction requires v_0 = v_N = 0");
        }
    }

    HomogeneousGridFunction(Grid grid, std::vector<double> values)
        : HomogeneousGridFunction(GridFunction(grid, std::move(values))) {}

    static HomogeneousGridFunction zeros(Grid grid) {
        return HomogeneousGridFunction(GridFunction::zeros(grid));
    }

    /// Embeds N-1 interior values, padding the boundary with zeros.
    static HomogeneousGridFunction from_interior(Grid grid, std::span<const double> interior) {
        if (interior.size() != grid.interior_size()) {
            throw std::invalid_argument("from_interior needs N-1 = " + std::to_string(grid.interior_size()) +
                                        " values, got " + std::to_string(interior.size()));
        }
        std::vector<double> v(grid.size(), 0.0);
        std::copy(interior.begin(), interior.end(), v.begin() + 1);
        return {grid, std::move(v)};
    }

    /// Keeps the interior values of `gf` and zeroes both boundary entries.
    static HomogeneousGridFunction homogeneous_part(const GridFunction& gf) {
        return from_interior(gf.grid(), gf.interior());
    }
};

inline GridFunction sample(const Grid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
    return {grid, std::move(v)};
}

inline void require_same_grid(const GridFunction& u, const GridFunction& v) {
    if (!(u.grid() == v.grid())) {
        throw std::invalid_argument("grid functions live on different grids");
    }
}

/// (u,v)_h = h * sum_{j=0..N} u_j v_j, boundary terms at full weight.
inline double inner_product_h(const GridFunction& u, const GridFunction& v) {
    require_same_grid(u, v);
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += u[j] * v[j];
    return u.grid().mesh() * s;
}

inline double norm_h(const GridFunction& u) { return std::sqrt(inner_product_h(u, u)); }

inline double sup_norm(const GridFunction& u) {
    double m = 0.0;
    for (double x : u.values()) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace dbo
