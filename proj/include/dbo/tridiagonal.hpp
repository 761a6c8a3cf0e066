#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace dbo {

/// Tridiagonal system of size M with constant or varying bands.
///
/// lower[i] = A(i+1, i), diag[i] = A(i, i), upper[i] = A(i, i+1).
struct TridiagonalSystem {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    static TridiagonalSystem constant(std::size_t m, double sub, double main, double super) {
        return {std::vector<double>(m ? m - 1 : 0, sub), std::vector<double>(m, main),
                std::vector<double>(m ? m - 1 : 0, super)};
    }

    /// The Simpson averaging operator (1/6, 2/3, 1/6) on M interior unknowns.
    static TridiagonalSystem simpson(std::size_t m) { return constant(m, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0); }

    std::size_t size() const noexcept { return diag.size(); }

    bool strictly_diagonally_dominant() const {
        for (std::size_t i = 0; i < size(); ++i) {
            double off = 0.0;
            if (i > 0) off += std::abs(lower[i - 1]);
            if (i + 1 < size()) off += std::abs(upper[i]);
            if (!(std::abs(diag[i]) > off)) return false;
        }
        return true;
    }

    std::vector<double> apply(std::span<const double> x) const {
        const std::size_t m = size();
        std::vector<double> y(m);
        for (std::size_t i = 0; i < m; ++i) {
            double s = diag[i] * x[i];
            if (i > 0) s += lower[i - 1] * x[i - 1];
            if (i + 1 < m) s += upper[i] * x[i + 1];
            y[i] = s;
        }
        return y;
    }

    /// Thomas elimination without pivoting; valid for diagonally dominant systems.
    std::vector<double> solve(std::span<const double> rhs) const {
        const std::size_t m = size();
        if (rhs.size() != m) throw std::invalid_argument("tridiagonal solve: rhs size mismatch");
        if (m == 0) return {};
        std::vector<double> c(m), d(m);
        double denom = diag[0];
        c[0] = m > 1 ? upper[0] / denom : 0.0;
        d[0] = rhs[0] / denom;
        for (std::size_t i = 1; i < m; ++i) {
            denom = diag[i] - lower[i - 1] * c[i - 1];
            c[i] = i + 1 < m ? upper[i] / denom : 0.0;
            d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / denom;
        }
        std::vector<double> x(m);
        x[m - 1] = d[m - 1];
        for (std::size_t i = m - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
        return x;
    }
};

}  // namespace dbo
