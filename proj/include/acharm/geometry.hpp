#pragma once

// Finite-difference tensor calculus on a single chart: connection, curvature,
// covariant derivatives and traces. Central differences of order 2 or 4; all
// frame traces are g^{ij}-weighted coordinate traces.

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "acharm/chart.hpp"
#include "acharm/linalg.hpp"

namespace acharm {

inline std::size_t ipow(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

// Central difference of an array-valued function along one coordinate axis.
template <typename F>
std::vector<double> partial_along(F&& f, const Point& p, int axis, const FDConfig& fd) {
    const double h = fd.step;
    Point q = p;
    if (fd.order == 2) {
        q[axis] = p[axis] + h;
        std::vector<double> out = f(q);
        q[axis] = p[axis] - h;
        const std::vector<double> fm = f(q);
        const double inv = 1.0 / (2.0 * h);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (out[i] - fm[i]) * inv;
        return out;
    }
    // order 4: (-f(+2h) + 8 f(+h) - 8 f(-h) + f(-2h)) / (12 h)
    q[axis] = p[axis] + 2.0 * h;
    std::vector<double> f2 = f(q);
    q[axis] = p[axis] + h;
    const std::vector<double> f1 = f(q);
    q[axis] = p[axis] - h;
    const std::vector<double> fm1 = f(q);
    q[axis] = p[axis] - 2.0 * h;
    const std::vector<double> fm2 = f(q);
    const double inv = 1.0 / (12.0 * h);
    for (std::size_t i = 0; i < f2.size(); ++i)
        f2[i] = (-f2[i] + 8.0 * f1[i] - 8.0 * fm1[i] + fm2[i]) * inv;
    return f2;
}

inline Mat metric_inverse(const Chart& chart, const Point& p) {
    return spd_inverse(metric_at(chart, p));
}

// Gamma^k_{ij} = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij),
// flat layout [k*d*d + i*d + j], symmetric in (i, j) by construction.
inline std::vector<double> christoffel(const Chart& chart, const Point& p, const FDConfig& fd) {
    const int d = chart.dim;
    const Mat ginv = metric_inverse(chart, p);
    std::vector<std::vector<double>> dg(static_cast<std::size_t>(d));
    auto gfn = [&](const Point& q) { return metric_at(chart, q).a; };
    for (int i = 0; i < d; ++i) dg[static_cast<std::size_t>(i)] = partial_along(gfn, p, i, fd);
    std::vector<double> gam(ipow(d, 3), 0.0);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                double s = 0.0;
                for (int l = 0; l < d; ++l) {
                    const double t = dg[i][static_cast<std::size_t>(j) * d + l] +
                                     dg[j][static_cast<std::size_t>(i) * d + l] -
                                     dg[l][static_cast<std::size_t>(i) * d + j];
                    s += ginv(k, l) * t;
                }
                s *= 0.5;
                gam[(static_cast<std::size_t>(k) * d + i) * d + j] = s;
                gam[(static_cast<std::size_t>(k) * d + j) * d + i] = s;
            }
    return gam;
}

// Levi-Civita covariant derivative of a valence (r,s) tensor at a point.
// Output has valence (r, s+1) with the derivative index appended last.
inline std::vector<double> covariant_derivative_at(const Chart& chart, const TensorField& T,
                                                   const Point& p, const FDConfig& fd) {
    const int d = chart.dim;
    const int rank = T.val.rank();
    const std::size_t sz = ipow(d, rank);
    std::vector<std::vector<double>> dT(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) dT[static_cast<std::size_t>(c)] = partial_along(T.eval, p, c, fd);
    const std::vector<double> gam = christoffel(chart, p, fd);
    const std::vector<double> t0 = T.eval(p);
    std::vector<double> out(sz * static_cast<std::size_t>(d));

    std::vector<int> digits(static_cast<std::size_t>(rank), 0);
    for (std::size_t flat = 0; flat < sz; ++flat) {
        {
            std::size_t rest = flat;
            for (int k = rank - 1; k >= 0; --k) {
                digits[static_cast<std::size_t>(k)] = static_cast<int>(rest % d);
                rest /= d;
            }
        }
        for (int c = 0; c < d; ++c) {
            double v = dT[static_cast<std::size_t>(c)][flat];
            std::size_t stride = sz;
            for (int slot = 0; slot < rank; ++slot) {
                stride /= static_cast<std::size_t>(d);
                const int idx = digits[static_cast<std::size_t>(slot)];
                const std::size_t base = flat - static_cast<std::size_t>(idx) * stride;
                if (slot < T.val.up) {
                    for (int m = 0; m < d; ++m)
                        v += gam[(static_cast<std::size_t>(idx) * d + c) * d + m] *
                             t0[base + static_cast<std::size_t>(m) * stride];
                } else {
                    for (int m = 0; m < d; ++m)
                        v -= gam[(static_cast<std::size_t>(m) * d + c) * d + idx] *
                             t0[base + static_cast<std::size_t>(m) * stride];
                }
            }
            out[flat * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] = v;
        }
    }
    return out;
}

// Same, packaged as a lazily evaluated field. The chart is captured by
// value so the field may outlive the caller's chart object.
inline TensorField covariant_derivative(Chart chart, const TensorField& T, const FDConfig& fd) {
    return TensorField{{T.val.up, T.val.down + 1},
                       [chart = std::move(chart), T, fd](const Point& q) {
                           return covariant_derivative_at(chart, T, q, fd);
                       }};
}

// Contract the trailing index of a component array with a vector.
inline std::vector<double> contract_last(const std::vector<double>& arr, int dim, const Vec& x) {
    const std::size_t outer = arr.size() / static_cast<std::size_t>(dim);
    std::vector<double> out(outer, 0.0);
    for (std::size_t f = 0; f < outer; ++f) {
        double s = 0.0;
        for (int c = 0; c < dim; ++c) s += arr[f * static_cast<std::size_t>(dim) + c] * x[c];
        out[f] = s;
    }
    return out;
}

// nabla^2_{X,Y} T = (nabla nabla T)(.., inner=Y, outer=X); tensorial in X, Y.
inline std::vector<double> second_covariant_derivative(const Chart& chart, const TensorField& T,
                                                       const Vec& X, const Vec& Y, const Point& p,
                                                       const FDConfig& fd) {
    const TensorField dT = covariant_derivative(chart, T, fd);
    const std::vector<double> ddT = covariant_derivative_at(chart, dT, p, fd);
    return contract_last(contract_last(ddT, chart.dim, X), chart.dim, Y);
}

// Rough Laplacian: -g^{cd} (nabla nabla T)_{.., c, d}.
inline std::vector<double> rough_laplacian(const Chart& chart, const TensorField& T,
                                           const Point& p, const FDConfig& fd) {
    const int d = chart.dim;
    const TensorField dT = covariant_derivative(chart, T, fd);
    const std::vector<double> ddT = covariant_derivative_at(chart, dT, p, fd);
    const Mat ginv = metric_inverse(chart, p);
    const std::size_t outer = ddT.size() / ipow(d, 2);
    std::vector<double> out(outer, 0.0);
    for (std::size_t f = 0; f < outer; ++f) {
        double s = 0.0;
        for (int c = 0; c < d; ++c)
            for (int e = 0; e < d; ++e)
                s += ginv(c, e) *
                     ddT[(f * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)) * d + e];
        out[f] = -s;
    }
    return out;
}

// Riemann components R^l_{kij} with R(X,Y)Z = R^l_{kij} X^i Y^j Z^k d_l, i.e.
// R(X,Y) = nabla^2_{X,Y} - nabla^2_{Y,X}. Layout [((l*d+k)*d+i)*d+j].
inline std::vector<double> riemann(const Chart& chart, const Point& p, const FDConfig& fd) {
    const int d = chart.dim;
    auto gfn = [&](const Point& q) { return christoffel(chart, q, fd); };
    std::vector<std::vector<double>> dG(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) dG[static_cast<std::size_t>(i)] = partial_along(gfn, p, i, fd);
    const std::vector<double> G = gfn(p);
    auto gat = [&](const std::vector<double>& a, int k, int i, int j) {
        return a[(static_cast<std::size_t>(k) * d + i) * d + j];
    };
    std::vector<double> R(ipow(d, 4));
    for (int l = 0; l < d; ++l)
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double v = gat(dG[static_cast<std::size_t>(i)], l, j, k) -
                               gat(dG[static_cast<std::size_t>(j)], l, i, k);
                    for (int m = 0; m < d; ++m)
                        v += gat(G, l, i, m) * gat(G, m, j, k) - gat(G, l, j, m) * gat(G, m, i, k);
                    R[((static_cast<std::size_t>(l) * d + k) * d + i) * d + j] = v;
                }
    return R;
}

inline Vec riemann_apply(const std::vector<double>& R, int dim, const Vec& X, const Vec& Y,
                         const Vec& Z) {
    Vec out(static_cast<std::size_t>(dim), 0.0);
    for (int l = 0; l < dim; ++l) {
        double s = 0.0;
        for (int k = 0; k < dim; ++k)
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    s += R[((static_cast<std::size_t>(l) * dim + k) * dim + i) * dim + j] * X[i] *
                         Y[j] * Z[k];
        out[l] = s;
    }
    return out;
}

inline double sectional_curvature(const std::vector<double>& R, const Mat& g, const Vec& X,
                                  const Vec& Y) {
    const Vec ryx = riemann_apply(R, g.n, X, Y, Y);
    const double num = inner(g, ryx, X);
    const double den = inner(g, X, X) * inner(g, Y, Y) - inner(g, X, Y) * inner(g, X, Y);
    return num / den;
}

// Ricci form rho(X,Y) = trace(Z -> R(Z,X)Y): rho_{jk} = R^i_{kij}.
inline Mat ricci_form(const Chart& chart, const Point& p, const FDConfig& fd) {
    const int d = chart.dim;
    const std::vector<double> R = riemann(chart, p, fd);
    Mat ric(d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            double s = 0.0;
            for (int i = 0; i < d; ++i)
                s += R[((static_cast<std::size_t>(i) * d + k) * d + i) * d + j];
            ric(j, k) = s;
        }
    return ric;
}

inline Mat ricci_operator(const Chart& chart, const Point& p, const FDConfig& fd) {
    const Mat ric = ricci_form(chart, p, fd);
    const Mat ginv = metric_inverse(chart, p);
    return mat_mul(ginv, ric);
}

inline Vec gradient(const Chart& chart, const TensorField& f, const Point& p, const FDConfig& fd) {
    const std::vector<double> df = [&] {
        std::vector<double> out(static_cast<std::size_t>(chart.dim));
        for (int c = 0; c < chart.dim; ++c) out[static_cast<std::size_t>(c)] = partial_along(f.eval, p, c, fd)[0];
        return out;
    }();
    const Mat ginv = metric_inverse(chart, p);
    Vec grad(static_cast<std::size_t>(chart.dim), 0.0);
    for (int i = 0; i < chart.dim; ++i)
        for (int j = 0; j < chart.dim; ++j) grad[i] += ginv(i, j) * df[j];
    return grad;
}

// (L_X T)(Y) = [X, TY] - T[X, Y] for a (1,1) tensor T, via coordinate partials:
// (L_X T)^i_j = X^k d_k T^i_j - T^k_j d_k X^i + T^i_k d_j X^k.
inline Mat lie_derivative_11(const Chart& chart, const TensorField& X, const TensorField& T,
                             const Point& p, const FDConfig& fd) {
    const int d = chart.dim;
    require_in_domain(chart, p);
    const Vec x0 = X.eval(p);
    const std::vector<double> t0 = T.eval(p);
    std::vector<std::vector<double>> dX(static_cast<std::size_t>(d)), dT(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) {
        dX[static_cast<std::size_t>(c)] = partial_along(X.eval, p, c, fd);
        dT[static_cast<std::size_t>(c)] = partial_along(T.eval, p, c, fd);
    }
    Mat out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double v = 0.0;
            for (int k = 0; k < d; ++k) {
                v += x0[k] * dT[static_cast<std::size_t>(k)][static_cast<std::size_t>(i) * d + j];
                v -= t0[static_cast<std::size_t>(k) * d + j] * dX[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
                v += t0[static_cast<std::size_t>(i) * d + k] * dX[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            }
            out(i, j) = v;
        }
    return out;
}

// Exterior derivative, unnormalized cyclic-sum convention:
//   1-form:  (dw)_{ij}  = d_i w_j - d_j w_i
//   2-form:  (dW)_{ijk} = d_i W_{jk} + d_j W_{ki} + d_k W_{ij}
inline std::vector<double> exterior_derivative(const Chart& chart, const TensorField& omega,
                                               const Point& p, const FDConfig& fd) {
    const int d = chart.dim;
    require_in_domain(chart, p);
    std::vector<std::vector<double>> dw(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) dw[static_cast<std::size_t>(c)] = partial_along(omega.eval, p, c, fd);
    if (omega.val.down == 1 && omega.val.up == 0) {
        std::vector<double> out(ipow(d, 2), 0.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                out[static_cast<std::size_t>(i) * d + j] =
                    dw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                    dw[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        return out;
    }
    if (omega.val.down == 2 && omega.val.up == 0) {
        std::vector<double> out(ipow(d, 3), 0.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    out[(static_cast<std::size_t>(i) * d + j) * d + k] =
                        dw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j) * d + k] +
                        dw[static_cast<std::size_t>(j)][static_cast<std::size_t>(k) * d + i] +
                        dw[static_cast<std::size_t>(k)][static_cast<std::size_t>(i) * d + j];
        return out;
    }
    throw Error("exterior_derivative expects a 1-form or 2-form");
}

inline TensorField metric_field(Chart chart) {
    return TensorField{{0, 2},
                       [chart = std::move(chart)](const Point& q) { return metric_at(chart, q).a; }};
}

inline Mat endo_from_array(const std::vector<double>& a, int dim) {
    Mat m(dim);
    m.a = a;
    return m;
}

}  // namespace acharm
