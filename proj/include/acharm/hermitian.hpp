#pragma once

// Almost Hermitian structures (even-dimensional chart, orthogonal J with
// J^2 = -I) and the harmonicity residual [nabla*nabla J, J] of J.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "acharm/chart.hpp"
#include "acharm/geometry.hpp"

namespace acharm {

struct AlmostHermitianStructure {
    Chart chart;
    TensorField J;  // (1,1)
    std::string name;
};

inline Mat J_at(const AlmostHermitianStructure& h, const Point& p) {
    return endo_from_array(h.J.eval(p), h.chart.dim);
}

inline std::map<std::string, double> validate_hermitian(const AlmostHermitianStructure& h,
                                                        const std::vector<Point>& points,
                                                        double tol = 1e-12) {
    std::map<std::string, double> worst{{"J_square", 0.0}, {"J_isometry", 0.0}};
    for (const auto& p : points) {
        const Mat g = metric_at(h.chart, p);
        const Mat J = J_at(h, p);
        const double r1 = max_abs(mat_mul(J, J) + Mat::identity(h.chart.dim));
        const double r2 = max_abs(mat_mul(transpose(J), mat_mul(g, J)) - g);
        worst["J_square"] = std::max(worst["J_square"], r1);
        worst["J_isometry"] = std::max(worst["J_isometry"], r2);
        if (r1 > tol)
            throw AxiomViolation("J_square", p, r1, "J^2 != -I on '" + h.name + "'");
        if (r2 > tol)
            throw AxiomViolation("J_isometry", p, r2, "g(JX,JY) != g(X,Y) on '" + h.name + "'");
    }
    return worst;
}

// Rough Laplacian nabla*nabla J of the almost complex structure.
inline Mat hermitian_rough_laplacian_J(const AlmostHermitianStructure& h, const Point& p,
                                       const FDConfig& fd) {
    return endo_from_array(rough_laplacian(h.chart, h.J, p, fd), h.chart.dim);
}

// Harmonicity residual [nabla*nabla J, J].
inline Mat hermitian_harmonic_residual(const AlmostHermitianStructure& h, const Point& p,
                                       const FDConfig& fd) {
    const Mat L = hermitian_rough_laplacian_J(h, p, fd);
    const Mat J = J_at(h, p);
    return mat_mul(L, J) - mat_mul(J, L);
}

// Co-differential trace delta J = -nabla_{E_a} J (E_a); zero iff the
// structure is cosymplectic.
inline Vec hermitian_delta_J(const AlmostHermitianStructure& h, const Point& p,
                             const FDConfig& fd) {
    const int d = h.chart.dim;
    const std::vector<double> DJ = covariant_derivative_at(h.chart, h.J, p, fd);
    const Mat ginv = metric_inverse(h.chart, p);
    Vec out(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                out[i] -= ginv(a, b) * DJ[(static_cast<std::size_t>(i) * d + b) * d + a];
    return out;
}

// nabla_{grad f} J; vanishing is the "Kaehler null" condition on grad f.
inline Mat kahler_null_operator(const AlmostHermitianStructure& h, const TensorField& f,
                                const Point& p, const FDConfig& fd) {
    const Vec gf = gradient(h.chart, f, p, fd);
    const std::vector<double> DJ = covariant_derivative_at(h.chart, h.J, p, fd);
    return endo_from_array(contract_last(DJ, h.chart.dim, gf), h.chart.dim);
}

inline double kahler_null_check(const AlmostHermitianStructure& h, const TensorField& f,
                                const Point& p, const FDConfig& fd) {
    const Mat g = metric_at(h.chart, p);
    return endo_norm_g(g, spd_inverse(g), kahler_null_operator(h, f, p, fd));
}

}  // namespace acharm
