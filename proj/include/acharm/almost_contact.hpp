#pragma once

// Almost contact metric structures (phi, xi, eta, g) on a chart, the
// hyperplane bundle D = ker eta = im phi with its projected connection and
// complex structure J = phi|_D, and the curvature of that connection.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "acharm/chart.hpp"
#include "acharm/geometry.hpp"
#include "acharm/linalg.hpp"

namespace acharm {

struct AlmostContactStructure {
    Chart chart;
    TensorField xi;   // (1,0) Reeb field
    TensorField eta;  // (0,1) dual form
    TensorField phi;  // (1,1) structure tensor
    std::string name;
};

struct StructureClassification {
    bool is_contact_metric = false;
    bool is_K_contact = false;
    bool is_H_contact = false;
    std::map<std::string, double> residuals;
};

// The fundamental 2-form of a contact metric structure satisfies
// d eta = 2 Phi under the unnormalized cyclic-sum convention used by
// exterior_derivative; the classification residual carries the 1/2.
inline constexpr double kContactFormFactor = 0.5;

inline Vec xi_at(const AlmostContactStructure& s, const Point& p) { return s.xi.eval(p); }
inline Vec eta_at(const AlmostContactStructure& s, const Point& p) { return s.eta.eval(p); }

inline Mat phi_at(const AlmostContactStructure& s, const Point& p) {
    return endo_from_array(s.phi.eval(p), s.chart.dim);
}

// P = I - xi (x) eta, the orthogonal projection onto D.
inline Mat d_projector(const AlmostContactStructure& s, const Point& p) {
    const int d = s.chart.dim;
    const Vec xi = xi_at(s, p);
    const Vec eta = eta_at(s, p);
    Mat P = Mat::identity(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) P(i, j) -= xi[i] * eta[j];
    return P;
}

inline Vec d_project(const AlmostContactStructure& s, const Vec& X, const Point& p) {
    const Vec xi = xi_at(s, p);
    const Vec eta = eta_at(s, p);
    Vec out = X;
    vec_axpy(-dot(eta, X), xi, out);
    return out;
}

// Phi(X, Y) = g(X, phi Y); components Phi_ij = g_ik phi^k_j.
inline Mat fundamental_two_form(const AlmostContactStructure& s, const Point& p) {
    return mat_mul(metric_at(s.chart, p), phi_at(s, p));
}

// h = 1/2 L_xi phi.
inline Mat h_tensor(const AlmostContactStructure& s, const Point& p, const FDConfig& fd) {
    return 0.5 * lie_derivative_11(s.chart, s.xi, s.phi, p, fd);
}

// r(u,v)w = <v,w> u - <u,w> v.
inline Vec r_tensor(const Mat& g, const Vec& u, const Vec& v, const Vec& w) {
    Vec out = vec_scale(inner(g, v, w), u);
    vec_axpy(-inner(g, u, w), v, out);
    return out;
}

namespace detail {

// nabla phi at p as a (1,2) array [(i*d + j)*d + c], c the derivative slot.
inline std::vector<double> nabla_phi(const AlmostContactStructure& s, const Point& p,
                                     const FDConfig& fd) {
    return covariant_derivative_at(s.chart, s.phi, p, fd);
}

// nabla xi at p as a (1,1) array [i*d + c].
inline Mat nabla_xi(const AlmostContactStructure& s, const Point& p, const FDConfig& fd) {
    return endo_from_array(covariant_derivative_at(s.chart, s.xi, p, fd), s.chart.dim);
}

inline Mat sandwich(const Mat& P, const Mat& A) { return mat_mul(P, mat_mul(A, P)); }

// Contract the derivative slot of a (1,2) array with a direction vector.
inline Mat contract_deriv(const std::vector<double>& D, int dim, const Vec& X) {
    return endo_from_array(contract_last(D, dim, X), dim);
}

}  // namespace detail

// (bar nabla_X J)(Y) = P(nabla_X phi (Y)) as an ambient endomorphism
// P (nabla_X phi) P; valid along any ambient direction X.
inline Mat bar_J_derivative_endo(const AlmostContactStructure& s, const Vec& X, const Point& p,
                                 const FDConfig& fd) {
    const Mat P = d_projector(s, p);
    return detail::sandwich(P, detail::contract_deriv(detail::nabla_phi(s, p, fd), s.chart.dim, X));
}

// Direct evaluation bar nabla_X (J sY) - J bar nabla_X sY on the projected
// constant-coefficient section sY(q) = P(q) Y.
inline Vec bar_J_derivative_direct(const AlmostContactStructure& s, const Vec& X, const Vec& Y,
                                   const Point& p, const FDConfig& fd) {
    const TensorField sY = vector_field([&s, Y](const Point& q) { return d_project(s, Y, q); });
    const TensorField JsY = vector_field([&s, sY](const Point& q) {
        return mat_vec(endo_from_array(s.phi.eval(q), s.chart.dim), sY.eval(q));
    });
    const Vec dJs = contract_last(covariant_derivative_at(s.chart, JsY, p, fd), s.chart.dim, X);
    const Vec ds = contract_last(covariant_derivative_at(s.chart, sY, p, fd), s.chart.dim, X);
    return vec_sub(d_project(s, dJs, p), mat_vec(phi_at(s, p), d_project(s, ds, p)));
}

// Public two-route operation: both evaluations must agree to tol_d1.
inline Vec bar_derivative_of_J(const AlmostContactStructure& s, const Vec& X, const Vec& Y,
                               const Point& p, const FDConfig& fd) {
    const Vec eta = eta_at(s, p);
    if (std::fabs(dot(eta, Y)) > 1e-6) throw NotInD("bar_derivative_of_J: Y has an eta-component");
    const Vec via_formula = mat_vec(bar_J_derivative_endo(s, X, p, fd), Y);
    const Vec direct = bar_J_derivative_direct(s, X, Y, p, fd);
    const Mat g = metric_at(s.chart, p);
    if (norm_g(g, vec_sub(via_formula, direct)) > 10.0 * fd.tol_d1)
        throw Error("bar_derivative_of_J: evaluation routes disagree on '" + s.name + "'");
    return via_formula;
}

// bar nabla^2_{X,Y} J = bar nabla_X (bar nabla_Y J) - bar nabla_{nabla_X Y} J,
// with the Levi-Civita connection in the correction subscript.
inline Mat bar_second_derivative_J(const AlmostContactStructure& s, const Vec& X, const Vec& Y,
                                   const Point& p, const FDConfig& fd) {
    const int d = s.chart.dim;
    const TensorField AY = endo_field([&s, Y, fd, d](const Point& q) {
        const Mat Pq = d_projector(s, q);
        return detail::sandwich(Pq, detail::contract_deriv(detail::nabla_phi(s, q, fd), d, Y));
    });
    const Mat P = d_projector(s, p);
    const Mat dA = detail::contract_deriv(covariant_derivative_at(s.chart, AY, p, fd), d, X);

    const std::vector<double> gam = christoffel(s.chart, p, fd);
    Vec w(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                w[k] += gam[(static_cast<std::size_t>(k) * d + i) * d + j] * X[i] * Y[j];
    const Mat corr = detail::contract_deriv(detail::nabla_phi(s, p, fd), d, w);
    return detail::sandwich(P, dA) - detail::sandwich(P, corr);
}

// Rough Laplacian of J in (D, bar nabla): -g^{cd} bar nabla^2_{c,d} J.
inline Mat bar_rough_laplacian_J(const AlmostContactStructure& s, const Point& p,
                                 const FDConfig& fd) {
    const int d = s.chart.dim;
    const Mat ginv = metric_inverse(s.chart, p);
    const Mat P = d_projector(s, p);
    Mat sum(d);
    for (int dir = 0; dir < d; ++dir) {
        const TensorField A = endo_field([&s, dir, fd, d](const Point& q) {
            Vec e(static_cast<std::size_t>(d), 0.0);
            e[static_cast<std::size_t>(dir)] = 1.0;
            const Mat Pq = d_projector(s, q);
            return detail::sandwich(Pq, detail::contract_deriv(detail::nabla_phi(s, q, fd), d, e));
        });
        const std::vector<double> dA = covariant_derivative_at(s.chart, A, p, fd);
        for (int c = 0; c < d; ++c) {
            const double coeff = -ginv(c, dir);
            if (coeff == 0.0) continue;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    sum(i, j) += coeff * dA[(static_cast<std::size_t>(i) * d + j) * d + c];
        }
    }
    // correction term: + bar nabla_{w} J with w^k = g^{cd} Gamma^k_{cd}
    const std::vector<double> gam = christoffel(s.chart, p, fd);
    Vec w(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k)
        for (int c = 0; c < d; ++c)
            for (int e = 0; e < d; ++e)
                w[k] += ginv(c, e) * gam[(static_cast<std::size_t>(k) * d + c) * d + e];
    const Mat corr = detail::contract_deriv(detail::nabla_phi(s, p, fd), d, w);
    return detail::sandwich(P, sum) + detail::sandwich(P, corr);
}

// bar R(X,Y)Z = (bar nabla^2_{X,Y} - bar nabla^2_{Y,X}) applied to the
// projected constant section through Z.
inline Vec bar_curvature(const AlmostContactStructure& s, const Vec& X, const Vec& Y, const Vec& Z,
                         const Point& p, const FDConfig& fd) {
    const int d = s.chart.dim;
    {
        const Vec eta = eta_at(s, p);
        if (std::fabs(dot(eta, X)) > 1e-6 || std::fabs(dot(eta, Y)) > 1e-6)
            throw NotInD("bar_curvature: X and Y must lie in D");
    }
    const TensorField sZ = vector_field([&s, Z](const Point& q) { return d_project(s, Z, q); });
    auto bar_dir_deriv = [&](const Vec& dir, const Point& q) {
        return d_project(s, contract_last(covariant_derivative_at(s.chart, sZ, q, fd), d, dir), q);
    };
    const std::vector<double> gam = christoffel(s.chart, p, fd);
    auto gamv = [&](const Vec& A, const Vec& B) {
        Vec w(static_cast<std::size_t>(d), 0.0);
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    w[k] += gam[(static_cast<std::size_t>(k) * d + i) * d + j] * A[i] * B[j];
        return w;
    };
    auto second = [&](const Vec& A, const Vec& B) {
        const TensorField inner_field =
            vector_field([&, B](const Point& q) { return bar_dir_deriv(B, q); });
        const Vec outer = d_project(
            s, contract_last(covariant_derivative_at(s.chart, inner_field, p, fd), d, A), p);
        return vec_sub(outer, bar_dir_deriv(gamv(A, B), p));
    };
    return vec_sub(second(X, Y), second(Y, X));
}

// bar R(X,Y) as an ambient endomorphism (columns over projected basis vectors).
inline Mat bar_curvature_endo(const AlmostContactStructure& s, const Vec& X, const Vec& Y,
                              const Point& p, const FDConfig& fd) {
    const int d = s.chart.dim;
    Mat out(d);
    for (int k = 0; k < d; ++k) {
        Vec e(static_cast<std::size_t>(d), 0.0);
        e[static_cast<std::size_t>(k)] = 1.0;
        const Vec col = bar_curvature(s, X, Y, e, p, fd);
        for (int i = 0; i < d; ++i) out(i, k) = col[i];
    }
    return out;
}

// bar delta J = -tr_D bar nabla J, computed with the projector trace.
inline Vec bar_delta_J(const AlmostContactStructure& s, const Point& p, const FDConfig& fd) {
    const int d = s.chart.dim;
    const Mat ginv = metric_inverse(s.chart, p);
    const Mat P = d_projector(s, p);
    const std::vector<double> Dphi = detail::nabla_phi(s, p, fd);
    Vec out(static_cast<std::size_t>(d), 0.0);
    for (int a = 0; a < d; ++a) {
        Vec Pa(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) Pa[i] = P(i, a);
        const Mat A = detail::sandwich(P, detail::contract_deriv(Dphi, d, Pa));
        for (int b = 0; b < d; ++b) {
            const double coeff = -ginv(a, b);
            if (coeff == 0.0) continue;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) out[i] += coeff * A(i, j) * P(j, b);
        }
    }
    return out;
}

// Deterministic g-orthonormal frame of D: Gram-Schmidt over projected
// coordinate vectors, largest-norm pivot first, lowest index on ties.
inline std::vector<Vec> orthonormal_d_frame(const AlmostContactStructure& s, const Point& p) {
    const int d = s.chart.dim;
    const Mat g = metric_at(s.chart, p);
    const Mat P = d_projector(s, p);
    std::vector<Vec> cands;
    for (int a = 0; a < d; ++a) {
        Vec v(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) v[i] = P(i, a);
        cands.push_back(std::move(v));
    }
    std::vector<Vec> frame;
    while (static_cast<int>(frame.size()) < d - 1) {
        int best = -1;
        double best_norm = 1e-8;
        for (std::size_t c = 0; c < cands.size(); ++c) {
            const double n = norm_g(g, cands[c]);
            if (n > best_norm) {
                best_norm = n;
                best = static_cast<int>(c);
            }
        }
        if (best < 0) throw Error("orthonormal_d_frame: projected basis has deficient rank");
        Vec v = vec_scale(1.0 / best_norm, cands[static_cast<std::size_t>(best)]);
        cands.erase(cands.begin() + best);
        for (auto& c : cands) vec_axpy(-inner(g, c, v), v, c);
        frame.push_back(std::move(v));
    }
    return frame;
}

// Seeded unit vector in D at p.
inline Vec sample_d_vector(const AlmostContactStructure& s, const Point& p, SampleGen& gen) {
    const Mat g = metric_at(s.chart, p);
    for (;;) {
        const Vec v = d_project(s, gen.raw_vector(s.chart.dim), p);
        const double n = norm_g(g, v);
        if (n > 0.2) return vec_scale(1.0 / n, v);
    }
}

// Algebraic structure axioms at sampled points. Residuals are recorded per
// axiom; any residual above tol_algebraic raises AxiomViolation.
inline std::map<std::string, double> validate_structure(const AlmostContactStructure& s,
                                                        const std::vector<Point>& points,
                                                        double tol = 1e-12) {
    const int d = s.chart.dim;
    std::map<std::string, double> worst{{"metric_symmetric", 0.0},
                                        {"phi_square", 0.0},
                                        {"eta_xi", 0.0},
                                        {"eta_metric_dual", 0.0},
                                        {"phi_compatibility", 0.0}};
    auto record = [&](const std::string& axiom, double r, const Point& p) {
        worst[axiom] = std::max(worst[axiom], r);
        if (r > tol)
            throw AxiomViolation(axiom, p, r,
                                 "axiom '" + axiom + "' fails on '" + s.name + "' (residual " +
                                     std::to_string(r) + ")");
    };
    for (const auto& p : points) {
        const Mat g = metric_at(s.chart, p);
        record("metric_symmetric", max_abs(g - transpose(g)), p);
        cholesky(g);  // throws SingularMetric if not positive-definite

        const Vec xi = xi_at(s, p);
        const Vec eta = eta_at(s, p);
        const Mat phi = phi_at(s, p);

        Mat phi2 = mat_mul(phi, phi);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) phi2(i, j) += (i == j ? 1.0 : 0.0) - xi[i] * eta[j];
        record("phi_square", max_abs(phi2), p);

        record("eta_xi", std::fabs(dot(eta, xi) - 1.0), p);

        const Vec gxi = mat_vec(g, xi);
        record("eta_metric_dual", max_abs(vec_sub(eta, gxi)), p);

        Mat compat = mat_mul(transpose(phi), mat_mul(g, phi)) - g;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) compat(i, j) += eta[i] * eta[j];
        record("phi_compatibility", max_abs(compat), p);
    }
    return worst;
}

// Residual of the defining contact metric relation at one point.
inline double contact_metric_residual(const AlmostContactStructure& s, const Point& p,
                                      const FDConfig& fd) {
    const Mat Phi = fundamental_two_form(s, p);
    const std::vector<double> deta = exterior_derivative(s.chart, s.eta, p, fd);
    double r = 0.0;
    const int d = s.chart.dim;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            r = std::max(r, std::fabs(Phi(i, j) -
                                      kContactFormFactor * deta[static_cast<std::size_t>(i) * d + j]));
    return r;
}

// Contact-metric and K-contact flags; the H-contact flag needs the tension
// field and is filled in by classify() in the harmonicity layer.
inline StructureClassification classify_algebraic(const AlmostContactStructure& s,
                                                  const std::vector<Point>& points,
                                                  const FDConfig& fd) {
    StructureClassification out;
    out.residuals = validate_structure(s, points, fd.tol_algebraic);
    double cm = 0.0, hmax = 0.0;
    for (const auto& p : points) {
        cm = std::max(cm, contact_metric_residual(s, p, fd));
        const Mat g = metric_at(s.chart, p);
        hmax = std::max(hmax, endo_norm_g(g, spd_inverse(g), h_tensor(s, p, fd)));
    }
    out.residuals["contact_metric"] = cm;
    out.residuals["K_contact"] = hmax;
    out.is_contact_metric = cm < fd.tol_d1;
    out.is_K_contact = hmax < fd.tol_d1;
    return out;
}

}  // namespace acharm
