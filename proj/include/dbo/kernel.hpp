#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbo/grid.hpp"
#include "dbo/matrix.hpp"
#include "dbo/quadrature.hpp"

namespace dbo {

namespace detail {
inline void require_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error(std::string(what) + " outside [0,1]: " + std::to_string(x));
    }
}
}  // namespace detail

/// Green's function of d^4/dx^4 on [0,1] with u = u' = 0 at both ends.
inline double kernel_K(double x, double y) {
    detail::require_unit_interval(x, "kernel_K x");
    detail::require_unit_interval(y, "kernel_K y");
    if (x == y) {
        const double w = x * (1.0 - x);
        return w * w * w / 3.0;
    }
    if (x < y) std::swap(x, y);
    // now y < x
    const double a = 1.0 - x;
    return a * a * y * y * (2.0 * x * (1.0 - y) + x - y) / 6.0;
}

/// Dense symmetric (N-1)x(N-1) matrix representing (delta_x^4)^{-1}.
class KernelMatrix {
public:
    KernelMatrix(Grid grid, SquareMatrix m) : grid_(grid), m_(std::move(m)) {}

    const Grid& grid() const noexcept { return grid_; }
    const SquareMatrix& matrix() const noexcept { return m_; }
    std::size_t size() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    /// Entry for 1-based interior node indices, K^h_{i,j}.
    double entry(std::size_t i, std::size_t j) const { return m_(i - 1, j - 1); }

private:
    Grid grid_;
    SquareMatrix m_;
};

/// K^h_{i,j} = h K(x_i, x_j), i,j = 1..N-1.
inline KernelMatrix assemble_kernel_matrix(const Grid& grid) {
    const std::size_t m = grid.interior_size();
    const double h = grid.mesh();
    SquareMatrix k(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = h * kernel_K(grid.node(i + 1), grid.node(j + 1));
            k(i, j) = v;
            k(j, i) = v;
        }
    return {grid, std::move(k)};
}

/// Closed-form entries from the generating-polynomial derivation, written in
/// integer node indices: for k <= j,
///   K^h_{j,k} = (N-j)^2 k^2 (2j(N-k) + N(j-k)) / (6 N^7).
/// Does not go through kernel_K.
inline KernelMatrix assemble_kernel_closed_form(const Grid& grid) {
    const std::size_t m = grid.interior_size();
    const auto nd = static_cast<double>(grid.intervals());
    const double denom = 6.0 * std::pow(nd, 7);
    SquareMatrix k(m);
    for (std::size_t j = 1; j <= m; ++j)
        for (std::size_t kk = 1; kk <= j; ++kk) {
            const auto jd = static_cast<double>(j), kd = static_cast<double>(kk);
            const double num = (nd - jd) * (nd - jd) * kd * kd * (2.0 * jd * (nd - kd) + nd * (jd - kd));
            k(j - 1, kk - 1) = num / denom;
            k(kk - 1, j - 1) = num / denom;
        }
    return {grid, std::move(k)};
}

/// u = K^h f on the interior, u_0 = u_N = 0.
inline HomogeneousGridFunction solve_biharmonic(const KernelMatrix& kh, const HomogeneousGridFunction& f) {
    if (!(kh.grid() == f.grid())) throw std::invalid_argument("solve_biharmonic: grid mismatch");
    const auto u = kh.matrix() * f.interior();
    return HomogeneousGridFunction::from_interior(f.grid(), u);
}

inline HomogeneousGridFunction solve_biharmonic(const HomogeneousGridFunction& f) {
    return solve_biharmonic(assemble_kernel_matrix(f.grid()), f);
}

/// Index of the node whose h-cell contains x (half cells at both ends).
inline std::size_t cell_index(const Grid& grid, double x) {
    const auto n = grid.intervals();
    const double t = std::floor(x * static_cast<double>(n) + 0.5);
    if (t <= 0.0) return 0;
    return std::min(static_cast<std::size_t>(t), n);
}

/// Piecewise-constant kernel K_h(x,y) = K(x_i, x_j) on the cell of (x_i, x_j).
inline double piecewise_kernel(const Grid& grid, double x, double y) {
    detail::require_unit_interval(x, "piecewise_kernel x");
    detail::require_unit_interval(y, "piecewise_kernel y");
    return kernel_K(grid.node(cell_index(grid, x)), grid.node(cell_index(grid, y)));
}

/// sqrt( \iint (K - G)^2 ) over [0,1]^2, integrated cell by cell on the K_h cell
/// partition. Off-diagonal cells lie on one side of x = y and use a 4x4 tensor
/// Gauss rule; diagonal cells are split along x = y into two triangles, each
/// integrated with a collapsed 8x8 rule. Exact (up to roundoff) whenever G is
/// polynomial of low degree on each of those pieces, as K_h and K are.
template <class G>
double hs_norm_difference_to(const Grid& grid, G&& other) {
    const std::size_t n = grid.intervals();
    const double h = grid.mesh();
    std::vector<double> edges(n + 2);
    edges[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) edges[i] = (static_cast<double>(i) - 0.5) * h;
    edges[n + 1] = 1.0;

    const auto rect = gauss_legendre(4);
    const auto tri = gauss_legendre(8);
    auto sq = [&](double x, double y) {
        const double d = kernel_K(x, y) - other(x, y);
        return d * d;
    };

    double total = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double xa = edges[i], xb = edges[i + 1];
        for (std::size_t j = 0; j <= n; ++j) {
            const double ya = edges[j], yb = edges[j + 1];
            if (i != j) {
                total += rect.integrate(
                    [&](double x) { return rect.integrate([&](double y) { return sq(x, y); }, ya, yb); }, xa, xb);
                continue;
            }
            // Lower triangle y in [a, x] and upper triangle y in [x, b], via y = a + (x - a) t
            // and y = x + (b - x) t respectively.
            const double a = xa, b = xb;
            total += tri.integrate(
                [&](double x) {
                    return (x - a) * tri.integrate([&](double t) { return sq(x, a + (x - a) * t); }, 0.0, 1.0);
                },
                a, b);
            total += tri.integrate(
                [&](double x) {
                    return (b - x) * tri.integrate([&](double t) { return sq(x, x + (b - x) * t); }, 0.0, 1.0);
                },
                a, b);
        }
    }
    return std::sqrt(total);
}

/// Hilbert-Schmidt distance between K and the piecewise-constant kernel K_h.
inline double hs_norm_difference(const Grid& grid) {
    return hs_norm_difference_to(grid, [&](double x, double y) { return piecewise_kernel(grid, x, y); });
}

/// Falling-factorial moments m_k = sum_j j(j-1)...(j-k+1) f_j, k = 0..3,
/// i.e. derivatives at z = 1 of the generating polynomial sum_j f_j z^j.
inline std::array<double, 4> generating_moments(const HomogeneousGridFunction& f) {
    std::array<double, 4> m{0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = 1; j + 1 < f.size(); ++j) {
        const auto jd = static_cast<double>(j);
        m[0] += f[j];
        m[1] += jd * f[j];
        m[2] += jd * (jd - 1.0) * f[j];
        m[3] += jd * (jd - 1.0) * (jd - 2.0) * f[j];
    }
    return m;
}

struct BoundaryValues {
    double u_first;    // u_1
    double u_last;     // u_{N-1}
    double ux_first;   // (u_x)_1
    double ux_last;    // (u_x)_{N-1}
};

/// Which coefficient of m_0 to use in the r'(1) = 0 condition. `derived` is what
/// differentiating r(z) gives (h^2/6); `as_printed` is the h^2 of the reference statement.
enum class MomentCoefficients { derived, as_printed };

/// Recovers u_1, u_{N-1}, (u_x)_1, (u_x)_{N-1} of delta_x^4 u = f from the
/// four conditions r(1) = r'(1) = r''(1) = r'''(1) = 0 on the generating
/// polynomial numerator. Needs N >= 3 (u_1 and u_{N-1} coincide for N = 2).
inline BoundaryValues boundary_moment_solve(const HomogeneousGridFunction& f,
                                            MomentCoefficients coeffs = MomentCoefficients::derived) {
    const Grid& g = f.grid();
    if (g.intervals() < 3) throw std::invalid_argument("boundary_moment_solve needs N >= 3");
    const auto m = generating_moments(f);
    const auto nd = static_cast<double>(g.intervals());
    const double h = g.mesh(), h2 = h * h;

    // Rows are the four conditions multiplied by h^2; unknowns (u_1, u_{N-1}, ux_1, ux_{N-1}).
    SquareMatrix a(4);
    std::vector<double> rhs(4);
    const double hh = h / 2.0;  // h^2 * 1/(2h)

    a(0, 0) = -1.0;
    a(0, 1) = -1.0;
    a(0, 2) = hh;
    a(0, 3) = -hh;
    rhs[0] = -h2 * h2 * m[0] / 12.0;

    const double m0_coeff = coeffs == MomentCoefficients::derived ? 1.0 / 6.0 : 1.0;
    a(1, 0) = -2.5;
    a(1, 1) = -(nd + 1.5);
    a(1, 2) = hh * 7.0 / 3.0;
    a(1, 3) = -hh * (nd + 5.0 / 3.0);
    rhs[1] = -h2 * h2 * (m0_coeff * m[0] + m[1] / 12.0);

    a(2, 0) = -23.0 / 6.0;
    a(2, 1) = -(5.0 / 6.0 + 2.0 * nd + nd * nd);
    a(2, 2) = hh * 10.0 / 3.0;
    a(2, 3) = -hh * (4.0 / 3.0 + 7.0 / 3.0 * nd + nd * nd);
    rhs[2] = -h2 * h2 * (7.0 / 36.0 * m[0] + m[1] / 3.0 + m[2] / 12.0);

    a(3, 0) = -2.5;
    a(3, 1) = -(-0.5 + 1.5 * nd * nd + nd * nd * nd);
    a(3, 2) = hh * 2.0;
    a(3, 3) = -hh * (nd + 2.0 * nd * nd + nd * nd * nd);
    rhs[3] = -h2 * h2 * (m[0] / 12.0 + 7.0 / 12.0 * m[1] + m[2] / 2.0 + m[3] / 12.0);

    std::vector<double> x;
    try {
        x = solve_dense(std::move(a), std::move(rhs));
    } catch (const std::runtime_error&) {
        throw std::runtime_error("boundary_moment_solve: singular 4x4 system at N = " +
                                 std::to_string(g.intervals()) + " (defect)");
    }
    return {x[0], x[1], x[2], x[3]};
}

}  // namespace dbo
