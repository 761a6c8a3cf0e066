#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbo/matrix.hpp"

namespace dbo {

struct SymmetricEigen {
    std::vector<double> values;   // descending
    SquareMatrix vectors;         // column k pairs with values[k]
    int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass drops to
/// `rel_tol * ||A||_F`. Throws after `max_sweeps` without convergence.
inline SymmetricEigen jacobi_eigen(SquareMatrix a, double rel_tol = 1e-14, int max_sweeps = 100) {
    const std::size_t n = a.rows();
    SquareMatrix v = SquareMatrix::identity(n);
    const double target = rel_tol * a.frobenius_norm();

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
        return std::sqrt(s);
    };

    int sweep = 0;
    while (off_norm() > target) {
        if (sweep == max_sweeps) {
            throw std::runtime_error("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) + " sweeps");
        }
        ++sweep;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p), arq = a(r, q);
                    const double np = arp - s * (arq + tau * arp);
                    const double nq = arq + s * (arp - tau * arq);
                    a(r, p) = np;
                    a(p, r) = np;
                    a(r, q) = nq;
                    a(q, r) = nq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymmetricEigen out{std::vector<double>(n), SquareMatrix(n), sweep};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

struct PowerIterationResult {
    double value;
    std::vector<double> vector;  // unit Euclidean norm
};

/// Power iteration from the all-ones vector; Rayleigh quotient of the last iterate.
inline PowerIterationResult power_iteration(const SquareMatrix& a, int iterations = 200) {
    const std::size_t n = a.rows();
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (int it = 0; it < iterations; ++it) {
        auto y = a * x;
        const double nrm = std::sqrt(dot(y, y));
        if (nrm == 0.0) throw std::runtime_error("power_iteration: zero iterate");
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / nrm;
    }
    const auto ax = a * x;
    return {dot(x, ax), x};
}

}  // namespace dbo
