#pragma once

// Compact finite-difference operators on l^2_{h,0}. All operator outputs are
// interior sequences (j = 1..N-1); boundary rows are never formed.

#include <cstddef>
#include <vector>

#include "dbo/grid.hpp"
#include "dbo/matrix.hpp"
#include "dbo/tridiagonal.hpp"

namespace dbo {

/// (u_{j+1} - u_{j-1}) / 2h
inline InteriorValues delta_x(const GridFunction& u) {
    const std::size_t n = u.grid().intervals();
    const double h = u.grid().mesh();
    InteriorValues out(n - 1);
    for (std::size_t j = 1; j < n; ++j) out[j - 1] = (u[j + 1] - u[j - 1]) / (2.0 * h);
    return out;
}

/// (u_{j+1} - 2u_j + u_{j-1}) / h^2
inline InteriorValues delta_x2(const GridFunction& u) {
    const std::size_t n = u.grid().intervals();
    const double h = u.grid().mesh();
    InteriorValues out(n - 1);
    for (std::size_t j = 1; j < n; ++j) out[j - 1] = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h);
    return out;
}

/// Simpson average (u_{j-1} + 4u_j + u_{j+1}) / 6
inline InteriorValues sigma_x(const GridFunction& u) {
    const std::size_t n = u.grid().intervals();
    InteriorValues out(n - 1);
    for (std::size_t j = 1; j < n; ++j) out[j - 1] = u[j - 1] / 6.0 + 2.0 * u[j] / 3.0 + u[j + 1] / 6.0;
    return out;
}

/// Hermitian derivative: solves sigma_x u_x = delta_x u with (u_x)_0 = (u_x)_N = 0.
inline HomogeneousGridFunction hermitian_derivative(const HomogeneousGridFunction& u) {
    const Grid& g = u.grid();
    const auto rhs = delta_x(u);
    const auto ux = TridiagonalSystem::simpson(g.interior_size()).solve(rhs);
    return HomogeneousGridFunction::from_interior(g, ux);
}

/// delta_x^4 u = (12/h^2) [delta_x u_x - delta_x^2 u]
inline InteriorValues delta_x4(const HomogeneousGridFunction& u) {
    const double h = u.grid().mesh();
    const auto dux = delta_x(hermitian_derivative(u));
    const auto d2u = delta_x2(u);
    InteriorValues out(dux.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 12.0 / (h * h) * (dux[i] - d2u[i]);
    return out;
}

/// Fourth-order second-derivative replacement 2 delta_x^2 u - delta_x u_x.
inline InteriorValues delta_tilde_x2(const HomogeneousGridFunction& u) {
    const auto dux = delta_x(hermitian_derivative(u));
    const auto d2u = delta_x2(u);
    InteriorValues out(dux.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * d2u[i] - dux[i];
    return out;
}

/// Dense (N-1)x(N-1) matrix of delta_x^4 acting on interior unknowns.
class DboMatrix {
public:
    DboMatrix(Grid grid, SquareMatrix m) : grid_(grid), m_(std::move(m)) {}

    const Grid& grid() const noexcept { return grid_; }
    const SquareMatrix& matrix() const noexcept { return m_; }
    std::size_t size() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    InteriorValues apply(const HomogeneousGridFunction& u) const { return m_ * u.interior(); }

private:
    Grid grid_;
    SquareMatrix m_;
};

/// Assembles D column by column: column k is delta_x^4 of the k-th unit grid function.
inline DboMatrix assemble_dbo_matrix(const Grid& grid) {
    const std::size_t m = grid.interior_size();
    SquareMatrix d(m);
    std::vector<double> e(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        e[k] = 1.0;
        const auto col = delta_x4(HomogeneousGridFunction::from_interior(grid, e));
        for (std::size_t i = 0; i < m; ++i) d(i, k) = col[i];
        e[k] = 0.0;
    }
    return {grid, std::move(d)};
}

}  // namespace dbo
