#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace dbo {

/// Dense row-major square matrix. Only what the kernel and spectral code need.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

    static SquareMatrix identity(std::size_t n) {
        SquareMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return n_; }
    std::size_t cols() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const { return {a_.data() + i * n_, n_}; }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> c(n_);
        for (std::size_t i = 0; i < n_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    std::vector<double> operator*(std::span<const double> x) const {
        if (x.size() != n_) throw std::invalid_argument("matrix-vector size mismatch");
        std::vector<double> y(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j] * x[j];
            y[i] = s;
        }
        return y;
    }

    SquareMatrix operator*(const SquareMatrix& b) const {
        if (b.n_ != n_) throw std::invalid_argument("matrix-matrix size mismatch");
        SquareMatrix c(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k) {
                const double aik = (*this)(i, k);
                for (std::size_t j = 0; j < n_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    /// max |A_ij - A_ji|
    double asymmetry() const {
        double m = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
        return m;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

inline double max_abs_difference(const SquareMatrix& a, const SquareMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("matrix size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

/// Solves A x = b by Gaussian elimination with partial pivoting. Throws on a zero pivot.
inline std::vector<double> solve_dense(SquareMatrix a, std::vector<double> b) {
    const std::size_t n = a.rows();
    if (b.size() != n) throw std::invalid_argument("solve_dense: rhs size mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (a(p, k) == 0.0) throw std::runtime_error("solve_dense: singular matrix");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(b[k], b[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs_difference(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Normwise relative deviation |a-b|_inf / |b|_inf (absolute when b is zero).
inline double relative_deviation(std::span<const double> a, std::span<const double> b) {
    const double scale = max_abs(b);
    const double d = max_abs_difference(a, b);
    return scale > 0.0 ? d / scale : d;
}

}  // namespace dbo
