#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbo/grid.hpp"
#include "dbo/jacobi.hpp"
#include "dbo/kernel.hpp"
#include "dbo/matrix.hpp"
#include "dbo/quadrature.hpp"
#include "dbo/random.hpp"

namespace dbo {

// ---------------------------------------------------------------------------
// Continuous clamped-beam spectrum: roots of cos(beta) cosh(beta) = 1.
//
// Eigenvalues are indexed from k = 1 (k = 1 is the root usually called beta_0).
// Root k sits near c_k = (k + 1/2) pi. Odd k lie in (c_k, (k+1) pi), even k in
// (k pi, c_k); for k = 1 this is (3pi/2, 2pi).
// ---------------------------------------------------------------------------

struct Bracket {
    double lo;
    double hi;
};

inline Bracket beta_bracket(std::size_t k) {
    if (k == 0) throw std::invalid_argument("eigenvalue index starts at 1");
    const double pi = std::numbers::pi;
    const auto kd = static_cast<double>(k);
    if (k % 2 == 1) return {(kd + 0.5) * pi, (kd + 1.0) * pi};
    return {kd * pi, (kd + 0.5) * pi};
}

/// 1 / cosh(b) without overflow; exactly 0 past b = 700.
inline double sech(double b) {
    b = std::abs(b);
    if (b > 700.0) return 0.0;
    const double e = std::exp(-b);
    return 2.0 * e / (1.0 + e * e);
}

/// A root stored as beta = center + offset, center = (k + 1/2) pi.
struct BeamRoot {
    std::size_t k;
    double center;
    double offset;

    double beta() const { return center + offset; }
    double lambda() const {
        const double b = beta();
        return (b * b) * (b * b);
    }
    /// Strict bracket membership, decided on the offset so it survives rounding of beta.
    bool strictly_in_bracket() const {
        const double half_pi = 0.5 * std::numbers::pi;
        if (k % 2 == 1) return offset > 0.0 && offset < half_pi;
        return offset < 0.0 && offset > -half_pi;
    }
    double residual() const {
        const double b = beta();
        return std::abs(std::cos(b) - sech(b));
    }
};

/// cos(c_k + d) = (-1)^(k+1) sin(d), so the root solves (-1)^(k+1) sin(d) = sech(c_k + d).
/// Bisection on d to width 1e-13, then Newton polish.
inline BeamRoot find_beam_root(std::size_t k) {
    if (k == 0) throw std::invalid_argument("eigenvalue index starts at 1");
    const double pi = std::numbers::pi;
    const double center = (static_cast<double>(k) + 0.5) * pi;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    // sech is taken as 0 here, so beta is the cosine root; the true offset asin(sech(c)) ~ 2 e^-c
    // is kept (until it underflows) so bracket membership stays strict.
    if (center > 700.0) return {k, center, sign * 2.0 * std::exp(-center)};

    auto f = [&](double d) { return sign * std::sin(d) - sech(center + d); };
    auto df = [&](double d) {
        const double b = center + d;
        return sign * std::cos(d) + sech(b) * std::tanh(b);
    };

    // f < 0 at d = 0 and f > 0 at the far end of the half-bracket.
    double near = 0.0, far = sign * 0.5 * pi;
    if (!(f(near) < 0.0 && f(far) > 0.0)) {
        throw std::runtime_error("find_beam_root: bracket without sign change at k = " + std::to_string(k));
    }
    while (std::abs(far - near) > 1e-13) {
        const double mid = 0.5 * (near + far);
        if (f(mid) < 0.0) {
            near = mid;
        } else {
            far = mid;
        }
    }
    double d = 0.5 * (near + far);
    for (int it = 0; it < 8; ++it) {
        const double step = f(d) / df(d);
        const double next = d - step;
        // keep the iterate on the correct side of the bracket
        if (sign * next <= 0.0 || std::abs(next) >= 0.5 * pi) break;
        d = next;
        if (std::abs(step) <= 1e-17 * std::max(std::abs(d), 1e-300)) break;
    }
    return {k, center, d};
}

class ContinuousSpectrum {
public:
    explicit ContinuousSpectrum(std::vector<BeamRoot> roots) : roots_(std::move(roots)) {}

    std::size_t count() const noexcept { return roots_.size(); }
    const std::vector<BeamRoot>& roots() const noexcept { return roots_; }
    /// 1-based
    double beta(std::size_t k) const { return roots_.at(k - 1).beta(); }
    double lambda(std::size_t k) const { return roots_.at(k - 1).lambda(); }

    std::vector<double> betas() const {
        std::vector<double> b;
        for (const auto& r : roots_) b.push_back(r.beta());
        return b;
    }
    std::vector<double> lambdas() const {
        std::vector<double> l;
        for (const auto& r : roots_) l.push_back(r.lambda());
        return l;
    }

private:
    std::vector<BeamRoot> roots_;
};

inline ContinuousSpectrum continuous_spectrum(std::size_t k_max) {
    if (k_max < 1) throw std::invalid_argument("continuous_spectrum needs k_max >= 1");
    std::vector<BeamRoot> roots;
    roots.reserve(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) roots.push_back(find_beam_root(k));
    return ContinuousSpectrum(std::move(roots));
}

/// L^2-normalized clamped-beam eigenfunction
///   phi(x) = A (cos bx - cosh bx) + B (sin bx - sinh bx),
/// with (A, B) proportional to (sin b - sinh b, cosh b - cos b). Intended for
/// moderate beta (cosh(beta) must be representable and cancellation tolerable).
class BeamEigenfunction {
public:
    explicit BeamEigenfunction(double beta) : beta_(beta) {
        double a = std::sin(beta) - std::sinh(beta);
        double b = std::cosh(beta) - std::cos(beta);
        const double scale = std::max(std::abs(a), std::abs(b));
        if (!(scale > 0.0) || !std::isfinite(scale)) {
            throw std::runtime_error("BeamEigenfunction: degenerate coefficients (A, B) = (0, 0)");
        }
        a_ = a / scale;
        b_ = b / scale;
        const double norm2 = composite_simpson([&](double x) {
            const double v = raw(x, 0);
            return v * v;
        }, 0.0, 1.0, 2048);
        const double s = 1.0 / std::sqrt(norm2);
        a_ *= s;
        b_ *= s;
    }

    double beta() const noexcept { return beta_; }
    double A() const noexcept { return a_; }
    double B() const noexcept { return b_; }

    double operator()(double x) const { return raw(x, 0); }
    /// order-th derivative, order in 0..4, evaluated analytically.
    double derivative(double x, int order) const { return raw(x, order); }

private:
    double raw(double x, int order) const {
        const double t = beta_ * x;
        const double c = std::cos(t), s = std::sin(t), ch = std::cosh(t), sh = std::sinh(t);
        const double bp = std::pow(beta_, order);
        switch (order % 4) {
            case 0: return bp * (a_ * (c - ch) + b_ * (s - sh));
            case 1: return bp * (a_ * (-s - sh) + b_ * (c - ch));
            case 2: return bp * (a_ * (-c - ch) + b_ * (-s - sh));
            default: return bp * (a_ * (s - sh) + b_ * (-c - ch));
        }
    }

    double beta_;
    double a_ = 0.0;
    double b_ = 0.0;
};

inline BeamEigenfunction eigenfunction(double beta) { return BeamEigenfunction(beta); }

// ---------------------------------------------------------------------------
// Discrete spectrum of delta_x^4 via the kernel matrix (Nystrom view).
// ---------------------------------------------------------------------------

class DiscreteSpectrum {
public:
    DiscreteSpectrum(Grid grid, std::vector<double> lambdas_h, SymmetricEigen kernel_eigen)
        : grid_(grid), lambdas_h_(std::move(lambdas_h)), eigen_(std::move(kernel_eigen)) {}

    const Grid& grid() const noexcept { return grid_; }
    std::size_t count() const noexcept { return lambdas_h_.size(); }
    /// ascending, 1-based
    double lambda(std::size_t k) const { return lambdas_h_.at(k - 1); }
    const std::vector<double>& lambdas() const noexcept { return lambdas_h_; }
    /// eigenvalues of K^h, descending (the reciprocals of lambdas())
    const std::vector<double>& inverse_lambdas() const noexcept { return eigen_.values; }
    const SymmetricEigen& kernel_eigen() const noexcept { return eigen_; }

private:
    Grid grid_;
    std::vector<double> lambdas_h_;
    SymmetricEigen eigen_;
};

inline DiscreteSpectrum discrete_spectrum(const KernelMatrix& kh) {
    auto eig = jacobi_eigen(kh.matrix(), 1e-14, 100);
    std::vector<double> lam(eig.values.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
        if (!(eig.values[i] > 0.0)) {
            throw std::runtime_error("discrete_spectrum: non-positive kernel eigenvalue " +
                                     std::to_string(eig.values[i]));
        }
        lam[i] = 1.0 / eig.values[i];
    }
    return {kh.grid(), std::move(lam), std::move(eig)};
}

inline DiscreteSpectrum discrete_spectrum(const Grid& grid) { return discrete_spectrum(assemble_kernel_matrix(grid)); }

/// min_j |lambda^{-1} - lambda_{h,j}^{-1}|
inline double distance_to_discrete(double lambda, const DiscreteSpectrum& ds) {
    double best = INFINITY;
    for (double mu : ds.inverse_lambdas()) best = std::min(best, std::abs(1.0 / lambda - mu));
    return best;
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

/// \int_0^1 K(x,x) dx = \int x^3 (1-x)^3 / 3, by exact rational integration of
/// the binomial expansion.
inline double trace_gamma() {
    // x^3 (1-x)^3 = sum_i C(3,i) (-1)^i x^{3+i}
    std::int64_t num = 0, den = 1;
    const std::int64_t binom[4] = {1, 3, 3, 1};
    for (int i = 0; i <= 3; ++i) {
        const std::int64_t c = (i % 2 ? -1 : 1) * binom[i];
        const std::int64_t d = 4 + i;  // \int x^{3+i} = 1/(4+i)
        num = num * d + c * den;
        den *= d;
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        num /= g;
        den /= g;
    }
    den *= 3;
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    return static_cast<double>(num / g) / static_cast<double>(den / g);
}

struct DiscreteTrace {
    double direct;       // h sum_i K(x_i, x_i)
    double closed_form;  // 1/420 + h^4/180 - h^6/126
};

inline DiscreteTrace trace_gamma_h(const Grid& grid) {
    const double h = grid.mesh();
    double s = 0.0;
    for (std::size_t i = 1; i < grid.intervals(); ++i) {
        const double x = grid.node(i);
        s += kernel_K(x, x);
    }
    const double h2 = h * h, h4 = h2 * h2, h6 = h4 * h2;
    return {h * s, 1.0 / 420.0 + h4 / 180.0 - h6 / 126.0};
}

// ---------------------------------------------------------------------------
// Convergence studies
// ---------------------------------------------------------------------------

/// Least-squares slope of log|y| against log x.
inline double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_loglog_slope needs >= 2 points");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw std::invalid_argument("fit_loglog_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / den;
}

struct SpectrumRow {
    std::size_t n;
    std::size_t k;
    double lambda;
    double lambda_h;
    double abs_error;  // |lambda - lambda_h|
    double rel_error;
};

struct SpectrumReport {
    std::vector<std::size_t> ks;
    std::vector<std::size_t> ns;
    std::vector<double> continuous;  // lambda_k for each entry of ks
    std::vector<SpectrumRow> rows;   // N-major, then k
    std::vector<double> slopes;      // per entry of ks; NaN when fewer than 2 N values

    const SpectrumRow& at(std::size_t n, std::size_t k) const {
        for (const auto& r : rows)
            if (r.n == n && r.k == k) return r;
        throw std::out_of_range("SpectrumReport: no row for N = " + std::to_string(n) + ", k = " + std::to_string(k));
    }
};

inline SpectrumReport convergence_study(std::vector<std::size_t> ks, std::vector<std::size_t> ns) {
    if (ks.empty() || ns.empty()) throw std::invalid_argument("convergence_study needs k and N values");
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ks.front() < 1) throw std::invalid_argument("eigenvalue indices start at 1");
    if (ks.back() > ns.front() - 1) {
        throw std::invalid_argument("k = " + std::to_string(ks.back()) + " exceeds N-1 = " +
                                    std::to_string(ns.front() - 1));
    }
    const auto cont = continuous_spectrum(ks.back());
    SpectrumReport rep;
    rep.ks = ks;
    rep.ns = ns;
    for (auto k : ks) rep.continuous.push_back(cont.lambda(k));
    for (auto n : ns) {
        const auto ds = discrete_spectrum(Grid(n));
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const double lam = rep.continuous[i], lh = ds.lambda(ks[i]);
            const double err = std::abs(lam - lh);
            rep.rows.push_back({n, ks[i], lam, lh, err, err / lam});
        }
    }
    for (auto k : ks) {
        if (ns.size() < 2) {
            rep.slopes.push_back(std::nan(""));
            continue;
        }
        std::vector<double> x, y;
        for (auto n : ns) {
            x.push_back(static_cast<double>(n));
            y.push_back(rep.at(n, k).abs_error);
        }
        rep.slopes.push_back(fit_loglog_slope(x, y));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Hilbert-Schmidt comparison inequality
//   sum_{k<N} |1/lambda_k - 1/lambda_{h,k}|^2 + sum_{k>=N} 1/lambda_k^2 <= \iint |K - K_h|^2
// ---------------------------------------------------------------------------

enum class HsComparison {
    piecewise_constant,  // K_h as defined on the h-cells
    exact_kernel         // negative control: K_h replaced by K, right side 0
};

struct HsInequalityReport {
    std::size_t n;
    double head;         // sum over k = 1..N-1
    double tail_exact;   // sum over the computed tail roots k = N..N-1+tail_terms
    double tail_lower;   // enclosure of the remainder beyond the computed roots
    double tail_upper;
    double right;        // \iint |K - K_h|^2
    double left_lower() const { return head + tail_exact + tail_lower; }
    double left_upper() const { return head + tail_exact + tail_upper; }
    bool holds() const { return left_lower() <= right; }
    bool holds_with_upper() const { return left_upper() <= right; }
    double ratio_right_over_h2() const {
        const double h = 1.0 / static_cast<double>(n);
        return right / (h * h);
    }
};

inline HsInequalityReport hs_inequality_check(const Grid& grid, std::size_t tail_terms,
                                              HsComparison comparison = HsComparison::piecewise_constant) {
    if (tail_terms < 1) throw std::invalid_argument("hs_inequality_check needs tail_terms >= 1");
    const std::size_t n = grid.intervals();
    const std::size_t last = n - 1 + tail_terms;
    const auto cont = continuous_spectrum(last);
    const auto ds = discrete_spectrum(grid);

    HsInequalityReport rep{n, 0.0, 0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = 1; k < n; ++k) {
        const double d = 1.0 / cont.lambda(k) - ds.inverse_lambdas()[k - 1];
        rep.head += d * d;
    }
    for (std::size_t k = n; k <= last; ++k) {
        const double inv = 1.0 / cont.lambda(k);
        rep.tail_exact += inv * inv;
    }
    // beta_k in (k pi, (k+1) pi) for k >= 2, so 1/lambda_k^2 = beta_k^-8 lies between
    // ((k+1)pi)^-8 and (k pi)^-8; integral comparison bounds the remainder k > last.
    const double pi8 = std::pow(std::numbers::pi, 8);
    const auto lastd = static_cast<double>(last);
    rep.tail_lower = std::pow(lastd + 2.0, -7) / (7.0 * pi8);
    rep.tail_upper = std::pow(lastd, -7) / (7.0 * pi8);

    double hs = 0.0;
    if (comparison == HsComparison::piecewise_constant) {
        hs = hs_norm_difference(grid);
    } else {
        hs = hs_norm_difference_to(grid, [](double x, double y) { return kernel_K(x, y); });
    }
    rep.right = hs * hs;
    return rep;
}

// ---------------------------------------------------------------------------
// Variational / power-iteration cross-check
// ---------------------------------------------------------------------------

struct RayleighReport {
    std::size_t n;
    std::vector<double> jacobi;     // top k_max eigenvalues of K^h
    std::vector<double> power;      // same, by deflated power iteration
    double max_rel_diff = 0.0;
    double max_random_quotient = 0.0;  // over random unit vectors
    double top_eigenvalue = 0.0;
    double min_top_vector_entry = 0.0; // after global sign normalization
    bool passes(double rel_tol = 1e-8) const {
        return max_rel_diff <= rel_tol && max_random_quotient <= top_eigenvalue + 1e-12 &&
               min_top_vector_entry >= 0.0;
    }
};

/// Compares Jacobi's largest k_max eigenvalues of K^h against 200-step power
/// iteration with Gram-Schmidt deflation, samples Rayleigh quotients of random
/// unit vectors, and checks the leading eigenvector can be taken nonnegative.
inline RayleighReport rayleigh_check(const Grid& grid, std::size_t k_max, std::uint64_t seed = 42,
                                     std::size_t random_vectors = 100) {
    if (grid.intervals() < 3) throw std::invalid_argument("rayleigh_check needs N >= 3");
    if (k_max < 1 || k_max > grid.interior_size()) throw std::invalid_argument("rayleigh_check: bad k_max");
    const auto kh = assemble_kernel_matrix(grid);
    const auto ds = discrete_spectrum(kh);
    const auto& a = kh.matrix();
    const std::size_t m = a.rows();

    RayleighReport rep;
    rep.n = grid.intervals();
    rep.top_eigenvalue = ds.inverse_lambdas()[0];

    std::vector<std::vector<double>> basis;
    for (std::size_t k = 0; k < k_max; ++k) {
        std::vector<double> x(m);
        for (std::size_t i = 0; i < m; ++i) x[i] = 1.0 + 0.1 * static_cast<double>(i % 7);
        auto orthonormalize = [&](std::vector<double>& v) {
            for (const auto& b : basis) {
                const double c = dot(v, b);
                for (std::size_t i = 0; i < m; ++i) v[i] -= c * b[i];
            }
            const double nrm = std::sqrt(dot(v, v));
            for (double& vi : v) vi /= nrm;
        };
        orthonormalize(x);
        for (int it = 0; it < 200; ++it) {
            x = a * x;
            orthonormalize(x);
        }
        const auto ax = a * x;
        const double val = dot(x, ax);
        rep.power.push_back(val);
        rep.jacobi.push_back(ds.inverse_lambdas()[k]);
        rep.max_rel_diff = std::max(rep.max_rel_diff, std::abs(val - ds.inverse_lambdas()[k]) / ds.inverse_lambdas()[k]);
        basis.push_back(std::move(x));
    }

    Rng rng(seed);
    for (std::size_t t = 0; t < random_vectors; ++t) {
        std::vector<double> u(m);
        for (double& ui : u) ui = rng.uniform(-1.0, 1.0);
        const double nrm2 = dot(u, u);
        const auto au = a * u;
        rep.max_random_quotient = std::max(rep.max_random_quotient, dot(u, au) / nrm2);
    }

    const auto& vec = ds.kernel_eigen().vectors;
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += vec(i, 0);
    const double sgn = sum < 0.0 ? -1.0 : 1.0;
    rep.min_top_vector_entry = INFINITY;
    for (std::size_t i = 0; i < m; ++i) rep.min_top_vector_entry = std::min(rep.min_top_vector_entry, sgn * vec(i, 0));
    return rep;
}

}  // namespace dbo
