#pragma once

// Small dense matrix/vector helpers for chart-sized problems (dim <= 8).
// Vectors are contravariant component arrays unless noted otherwise.

#include <cmath>
#include <cstddef>
#include <vector>

#include "acharm/errors.hpp"

namespace acharm {

using Vec = std::vector<double>;
using Point = std::vector<double>;

struct Mat {
    int n = 0;
    std::vector<double> a;  // row-major

    Mat() = default;
    explicit Mat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    static Mat identity(int dim) {
        Mat m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline Mat operator+(const Mat& x, const Mat& y) {
    Mat r(x.n);
    for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] = x.a[k] + y.a[k];
    return r;
}

inline Mat operator-(const Mat& x, const Mat& y) {
    Mat r(x.n);
    for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] = x.a[k] - y.a[k];
    return r;
}

inline Mat operator*(double s, const Mat& x) {
    Mat r(x.n);
    for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] = s * x.a[k];
    return r;
}

inline Mat mat_mul(const Mat& x, const Mat& y) {
    Mat r(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            const double xik = x(i, k);
            if (xik == 0.0) continue;
            for (int j = 0; j < x.n; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

inline Vec mat_vec(const Mat& m, const Vec& v) {
    Vec r(static_cast<std::size_t>(m.n), 0.0);
    for (int i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.n; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

inline Mat transpose(const Mat& m) {
    Mat r(m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) r(i, j) = m(j, i);
    return r;
}

inline Vec vec_add(const Vec& x, const Vec& y) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

inline Vec vec_sub(const Vec& x, const Vec& y) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

inline Vec vec_scale(double s, const Vec& x) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = s * x[i];
    return r;
}

inline void vec_axpy(double s, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

// g-weighted inner product <x, y> = g_ij x^i y^j.
inline double inner(const Mat& g, const Vec& x, const Vec& y) {
    double s = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) s += g(i, j) * x[i] * y[j];
    return s;
}

inline double norm_g(const Mat& g, const Vec& x) { return std::sqrt(std::fabs(inner(g, x, x))); }

// Frobenius-type norm of an endomorphism A^i_j: g_ik A^i_j A^k_l g^{jl}.
inline double endo_norm_g(const Mat& g, const Mat& ginv, const Mat& A) {
    double s = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int k = 0; k < g.n; ++k)
            for (int j = 0; j < g.n; ++j)
                for (int l = 0; l < g.n; ++l) s += g(i, k) * A(i, j) * A(k, l) * ginv(j, l);
    return std::sqrt(std::fabs(s));
}

// Norm of a (0,2) tensor B_ij: g^{ik} g^{jl} B_ij B_kl.
inline double bilinear_norm_g(const Mat& ginv, const Mat& B) {
    double s = 0.0;
    for (int i = 0; i < ginv.n; ++i)
        for (int k = 0; k < ginv.n; ++k)
            for (int j = 0; j < ginv.n; ++j)
                for (int l = 0; l < ginv.n; ++l) s += ginv(i, k) * ginv(j, l) * B(i, j) * B(k, l);
    return std::sqrt(std::fabs(s));
}

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}

inline double max_abs(const Mat& m) { return max_abs(m.a); }

// Cholesky factor L (lower) of a symmetric positive-definite matrix.
inline Mat cholesky(const Mat& g) {
    Mat L(g.n);
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = g(i, j);
            for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            if (i == j) {
                if (s <= 0.0 || !std::isfinite(s)) throw SingularMetric("matrix not positive-definite");
                L(i, i) = std::sqrt(s);
            } else {
                L(i, j) = s / L(j, j);
            }
        }
    }
    return L;
}

// Inverse of a symmetric positive-definite matrix via its Cholesky factor.
inline Mat spd_inverse(const Mat& g) {
    const Mat L = cholesky(g);
    const int n = g.n;
    Mat inv(n);
    // Solve L L^T x = e_j for each basis column.
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            double s = (i == j) ? 1.0 : 0.0;
            for (int k = 0; k < i; ++k) s -= L(i, k) * y[k];
            y[i] = s / L(i, i);
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = y[i];
            for (int k = i + 1; k < n; ++k) s -= L(k, i) * inv(k, j);
            inv(i, j) = s / L(i, i);
        }
    }
    // Symmetrize to kill rounding skew.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            const double v = 0.5 * (inv(i, j) + inv(j, i));
            inv(i, j) = v;
            inv(j, i) = v;
        }
    return inv;
}

}  // namespace acharm
