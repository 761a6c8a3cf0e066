#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbo/grid.hpp"
#include "dbo/operators.hpp"

namespace dbo {

/// One spline piece in local form s(y) = a y^3 + b y^2 + c y + d, y = x - x_j in [0, h].
struct LocalCubic {
    double a, b, c, d;

    double value(double y) const { return ((a * y + b) * y + c) * y + d; }
    double d1(double y) const { return (3.0 * a * y + 2.0 * b) * y + c; }
    double d2(double y) const { return 6.0 * a * y + 2.0 * b; }
    double d3() const { return 6.0 * a; }
};

/// Clamped C^2 cubic spline through homogeneous grid data, stored in Hermite form.
///
/// The node derivatives are the Hermitian derivative of the data, so each piece is
/// the Hermite cubic on (u_j, (u_x)_j, u_{j+1}, (u_x)_{j+1}). Both node vectors
/// vanish at x_0 and x_N.
class CubicSpline {
public:
    CubicSpline(HomogeneousGridFunction values, HomogeneousGridFunction derivs)
        : values_(std::move(values)), derivs_(std::move(derivs)) {
        require_same_grid(values_, derivs_);
    }

    const Grid& grid() const noexcept { return values_.grid(); }
    const HomogeneousGridFunction& node_values() const noexcept { return values_; }
    const HomogeneousGridFunction& node_derivs() const noexcept { return derivs_; }

    LocalCubic piece(std::size_t j) const {
        const std::size_t n = grid().intervals();
        if (j >= n) throw std::out_of_range("spline piece index " + std::to_string(j));
        const double h = grid().mesh();
        const double u0 = values_[j], u1 = values_[j + 1];
        const double d0 = derivs_[j], d1 = derivs_[j + 1];
        const double du = u1 - u0;
        return {(h * (d0 + d1) - 2.0 * du) / (h * h * h), (3.0 * du / h - 2.0 * d0 - d1) / h, d0, u0};
    }

    double eval(double x) const {
        const auto [j, y] = locate(x);
        return piece(j).value(y);
    }
    double eval_d1(double x) const {
        const auto [j, y] = locate(x);
        return piece(j).d1(y);
    }
    double eval_d2(double x) const {
        const auto [j, y] = locate(x);
        return piece(j).d2(y);
    }

    /// s''(x_j^-) for j >= 1 and s''(x_j^+) for j <= N-1.
    double d2_left(std::size_t j) const { return piece(j - 1).d2(grid().mesh()); }
    double d2_right(std::size_t j) const { return piece(j).d2(0.0); }

    /// s'''(x_j^+) - s'''(x_j^-) at an interior node.
    double third_derivative_jump(std::size_t j) const {
        if (j < 1 || j + 1 > grid().intervals()) {
            throw std::out_of_range("third_derivative_jump needs 1 <= j <= N-1, got " + std::to_string(j));
        }
        return piece(j).d3() - piece(j - 1).d3();
    }

private:
    struct Location {
        std::size_t piece;
        double offset;
    };

    // [x_j, x_{j+1}) belongs to piece j; x = 1 goes to the last piece.
    Location locate(double x) const {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw std::domain_error("spline evaluation point outside [0,1]: " + std::to_string(x));
        }
        const std::size_t n = grid().intervals();
        auto j = static_cast<std::size_t>(std::floor(x * static_cast<double>(n)));
        if (j >= n) j = n - 1;
        // floor(x*N) can land one cell too far right when x*N rounds up onto a node.
        if (j > 0 && x < grid().node(j)) --j;
        return {j, x - grid().node(j)};
    }

    HomogeneousGridFunction values_;
    HomogeneousGridFunction derivs_;
};

inline CubicSpline build_spline(const HomogeneousGridFunction& u) {
    return CubicSpline(u, hermitian_derivative(u));
}

/// \int_0^1 |s_u''|^2 as the sum of the closed-form per-interval integrals B_j.
inline double energy(const HomogeneousGridFunction& u) {
    const auto ux = hermitian_derivative(u);
    const std::size_t n = u.grid().intervals();
    const double h = u.grid().mesh();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double dslope = ux[j + 1] - ux[j];
        const double mix = (ux[j + 1] + ux[j]) - 2.0 * (u[j + 1] - u[j]) / h;
        total += dslope * dslope / h + 3.0 * mix * mix / h;
    }
    return total;
}

/// \int_0^1 s_u'' s_v''. The integrand is quadratic on each interval, so Simpson is exact.
inline double cross_energy(const HomogeneousGridFunction& u, const HomogeneousGridFunction& v) {
    require_same_grid(u, v);
    const auto su = build_spline(u);
    const auto sv = build_spline(v);
    const std::size_t n = u.grid().intervals();
    const double h = u.grid().mesh();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const auto pu = su.piece(j);
        const auto pv = sv.piece(j);
        const double f0 = pu.d2(0.0) * pv.d2(0.0);
        const double fm = pu.d2(0.5 * h) * pv.d2(0.5 * h);
        const double f1 = pu.d2(h) * pv.d2(h);
        total += h / 6.0 * (f0 + 4.0 * fm + f1);
    }
    return total;
}

}  // namespace dbo
