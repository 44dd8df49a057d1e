#pragma once

// Registry of the contact-metric identities verified by the engine. Each
// entry binds an id (the stable CLI key), a registry label, a tolerance
// class, an applicability rule and a residual evaluator over seeded points
// and argument vectors.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "acharm/checks.hpp"
#include "acharm/harmonicity.hpp"

namespace acharm {

struct IdentityContext {
    const AlmostContactStructure& s;
    const StructureClassification& cls;
    const std::vector<Point>& points;
    const FDConfig& fd;
    std::uint64_t seed;
};

struct IdentityCheck {
    std::string id;
    std::string ref;
    std::string description;
    TolClass tol_class = TolClass::d2;
    enum class Applies { acm, cm, cm_h } applies = Applies::cm;
    bool informational = false;     // diagnostic only, never gates
    bool gate_requires_cm = false;  // runs on all structures, gates only on contact metric ones
    std::function<Accumulator(const IdentityContext&)> run;
};

namespace detail {

inline SampleGen identity_gen(const IdentityContext& ctx, const std::string& id) {
    return SampleGen(ctx.seed ^ fnv1a("identity:" + id));
}

inline Mat r_endo(const Mat& g, const Vec& X, const Vec& Y) {
    const int d = g.n;
    const Vec gX = mat_vec(g, X), gY = mat_vec(g, Y);
    Mat out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = X[i] * gY[j] - Y[i] * gX[j];
    return out;
}

inline Mat riemann_endo(const std::vector<double>& R, int d, const Vec& X, const Vec& Y) {
    Mat out(d);
    for (int l = 0; l < d; ++l)
        for (int k = 0; k < d; ++k) {
            double v = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    v += R[((static_cast<std::size_t>(l) * d + k) * d + i) * d + j] * X[i] * Y[j];
            out(l, k) = v;
        }
    return out;
}

inline Mat commutator(const Mat& A, const Mat& B) { return mat_mul(A, B) - mat_mul(B, A); }

}  // namespace detail

inline const std::vector<IdentityCheck>& identity_registry() {
    using Applies = IdentityCheck::Applies;
    static const std::vector<IdentityCheck> registry = [] {
        std::vector<IdentityCheck> reg;

        reg.push_back({"axioms", "structure axioms",
                       "phi^2 = -I + eta (x) xi, eta(xi) = 1, eta = g(xi,.), metric compatibility",
                       TolClass::algebraic, Applies::acm, false, false,
                       [](const IdentityContext& ctx) {
                           Accumulator acc;
                           const auto residuals = validate_structure(
                               ctx.s, ctx.points, std::numeric_limits<double>::infinity());
                           for (const auto& [k, v] : residuals) {
                               (void)k;
                               acc.add(v);
                           }
                           return acc;
                       }});

        reg.push_back({"2.1", "(2.1)", "nabla_xi phi = 0", TolClass::d1, Applies::cm, false, false,
                       [](const IdentityContext& ctx) {
                           Accumulator acc;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat A = detail::contract_deriv(
                                   detail::nabla_phi(ctx.s, p, ctx.fd), ctx.s.chart.dim,
                                   xi_at(ctx.s, p));
                               acc.add(endo_norm_g(g, spd_inverse(g), A));
                           }
                           return acc;
                       }});

        reg.push_back({"2.2", "(2.2)", "nabla_xi xi = 0 (xi geodesic)", TolClass::d1, Applies::cm,
                       false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat dxi = detail::nabla_xi(ctx.s, p, ctx.fd);
                               acc.add(norm_g(g, mat_vec(dxi, xi_at(ctx.s, p))));
                           }
                           return acc;
                       }});

        reg.push_back({"2.3", "(2.3)", "nabla_X xi = -phi X - phi h X", TolClass::d1, Applies::cm,
                       false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           SampleGen gen = detail::identity_gen(ctx, "2.3");
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat dxi = detail::nabla_xi(ctx.s, p, ctx.fd);
                               const Mat phi = phi_at(ctx.s, p);
                               const Mat h = h_tensor(ctx.s, p, ctx.fd);
                               for (int k = 0; k < 2; ++k) {
                                   const Vec X = gen.unit_vector(g, ctx.s.chart.dim);
                                   Vec resid = mat_vec(dxi, X);
                                   vec_axpy(1.0, mat_vec(phi, X), resid);
                                   vec_axpy(1.0, mat_vec(phi, mat_vec(h, X)), resid);
                                   acc.add(norm_g(g, resid));
                               }
                           }
                           return acc;
                       }});

        reg.push_back({"2.7", "(2.7)", "h X = phi nabla_X xi - X for X in D", TolClass::d1,
                       Applies::cm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           SampleGen gen = detail::identity_gen(ctx, "2.7");
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat dxi = detail::nabla_xi(ctx.s, p, ctx.fd);
                               const Mat phi = phi_at(ctx.s, p);
                               const Mat h = h_tensor(ctx.s, p, ctx.fd);
                               for (int k = 0; k < 2; ++k) {
                                   const Vec X = sample_d_vector(ctx.s, p, gen);
                                   Vec resid = mat_vec(h, X);
                                   vec_axpy(-1.0, mat_vec(phi, mat_vec(dxi, X)), resid);
                                   vec_axpy(1.0, X, resid);
                                   acc.add(norm_g(g, resid));
                               }
                           }
                           return acc;
                       }});

        reg.push_back({"2.4", "(2.4)", "delta h = phi nabla*nabla xi - T(phi)", TolClass::d2,
                       Applies::cm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               Vec resid = delta_h(ctx.s, p, ctx.fd);
                               const Vec lap = rough_laplacian(ctx.s.chart, ctx.s.xi, p, ctx.fd);
                               vec_axpy(-1.0, mat_vec(phi_at(ctx.s, p), lap), resid);
                               vec_axpy(1.0, T_phi(ctx.s, p, ctx.fd), resid);
                               acc.add(norm_g(g, resid));
                           }
                           return acc;
                       }});

        reg.push_back({"2.5", "(2.5)", "phi delta h + tau(xi) + J T(phi) = 0 (route agreement)",
                       TolClass::d2, Applies::cm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat phi = phi_at(ctx.s, p);
                               Vec resid = mat_vec(phi, delta_h(ctx.s, p, ctx.fd));
                               vec_axpy(1.0, tau_xi(ctx.s, p, ctx.fd), resid);
                               vec_axpy(1.0, mat_vec(phi, T_phi(ctx.s, p, ctx.fd)), resid);
                               acc.add(norm_g(g, resid));
                           }
                           return acc;
                       }});

        reg.push_back({"L2.1", "Lemma 2.1", "bar nabla_{JX} J (JY) = -bar nabla_X J (Y)",
                       TolClass::d1, Applies::cm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           SampleGen gen = detail::identity_gen(ctx, "L2.1");
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat phi = phi_at(ctx.s, p);
                               for (int k = 0; k < 2; ++k) {
                                   const Vec X = sample_d_vector(ctx.s, p, gen);
                                   const Vec Y = sample_d_vector(ctx.s, p, gen);
                                   const Vec JX = mat_vec(phi, X), JY = mat_vec(phi, Y);
                                   Vec resid = mat_vec(bar_J_derivative_endo(ctx.s, JX, p, ctx.fd), JY);
                                   vec_axpy(1.0, mat_vec(bar_J_derivative_endo(ctx.s, X, p, ctx.fd), Y),
                                            resid);
                                   acc.add(norm_g(g, resid));
                               }
                           }
                           return acc;
                       }});

        reg.push_back({"2.9", "(2.9)", "bar nabla_xi J = 0", TolClass::d1, Applies::cm, false,
                       false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat A =
                                   bar_J_derivative_endo(ctx.s, xi_at(ctx.s, p), p, ctx.fd);
                               acc.add(endo_norm_g(g, spd_inverse(g), A));
                           }
                           return acc;
                       }});

        reg.push_back({"dbarJ", "bar-delta J", "bar delta J = 0", TolClass::d1, Applies::cm, false,
                       false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               acc.add(norm_g(g, bar_delta_J(ctx.s, p, ctx.fd)));
                           }
                           return acc;
                       }});

        reg.push_back({"L2.2", "Lemma 2.2",
                       "[bar nabla^2_{F,F} J - 2 bar R(F,JF) + bar nabla^2_{JF,JF} J, J] = "
                       "4 bar nabla_{bar nabla J(F,F)} J",
                       TolClass::d2, Applies::cm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           SampleGen gen = detail::identity_gen(ctx, "L2.2");
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat ginv = spd_inverse(g);
                               const Mat phi = phi_at(ctx.s, p);
                               for (int k = 0; k < 2; ++k) {
                                   const Vec F = sample_d_vector(ctx.s, p, gen);
                                   const Vec JF = mat_vec(phi, F);
                                   Mat lhs = bar_second_derivative_J(ctx.s, F, F, p, ctx.fd) +
                                             bar_second_derivative_J(ctx.s, JF, JF, p, ctx.fd);
                                   lhs = lhs - 2.0 * bar_curvature_endo(ctx.s, F, JF, p, ctx.fd);
                                   const Mat bracket = detail::commutator(lhs, phi);
                                   const Vec w =
                                       mat_vec(bar_J_derivative_endo(ctx.s, F, p, ctx.fd), F);
                                   const Mat rhs =
                                       4.0 * bar_J_derivative_endo(ctx.s, w, p, ctx.fd);
                                   acc.add(endo_norm_g(g, ginv, bracket - rhs));
                               }
                           }
                           return acc;
                       }});

        reg.push_back({"2.16", "(2.16)", "bar R(X,Y)Z = P R(X,Y)Z + r(nabla_X xi, nabla_Y xi) Z",
                       TolClass::d2, Applies::cm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           SampleGen gen = detail::identity_gen(ctx, "2.16");
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const std::vector<double> R = riemann(ctx.s.chart, p, ctx.fd);
                               const Mat dxi = detail::nabla_xi(ctx.s, p, ctx.fd);
                               for (int k = 0; k < 2; ++k) {
                                   const Vec X = sample_d_vector(ctx.s, p, gen);
                                   const Vec Y = sample_d_vector(ctx.s, p, gen);
                                   const Vec Z = sample_d_vector(ctx.s, p, gen);
                                   Vec resid = bar_curvature(ctx.s, X, Y, Z, p, ctx.fd);
                                   vec_axpy(-1.0,
                                            d_project(ctx.s,
                                                      riemann_apply(R, ctx.s.chart.dim, X, Y, Z), p),
                                            resid);
                                   vec_axpy(-1.0,
                                            r_tensor(g, mat_vec(dxi, X), mat_vec(dxi, Y), Z),
                                            resid);
                                   acc.add(norm_g(g, resid));
                               }
                           }
                           return acc;
                       }});

        reg.push_back({"2.18", "(2.18)", "[bar nabla* bar nabla J, J] = -[bar R(F_i, J F_i), J]",
                       TolClass::d2, Applies::cm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat ginv = spd_inverse(g);
                               const Mat phi = phi_at(ctx.s, p);
                               const Mat lhs =
                                   detail::commutator(bar_rough_laplacian_J(ctx.s, p, ctx.fd), phi);
                               Mat csum(ctx.s.chart.dim);
                               for (const Vec& F : orthonormal_d_frame(ctx.s, p)) {
                                   const Vec JF = mat_vec(phi, F);
                                   csum = csum + bar_curvature_endo(ctx.s, F, JF, p, ctx.fd);
                               }
                               acc.add(endo_norm_g(g, ginv,
                                                   lhs + detail::commutator(csum, phi)));
                           }
                           return acc;
                       }});

        reg.push_back({"2.19", "(2.19)", "sum R(F_i, J F_i) Z = -2 sum R(Z, F_i) J F_i",
                       TolClass::d2, Applies::cm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           SampleGen gen = detail::identity_gen(ctx, "2.19");
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat phi = phi_at(ctx.s, p);
                               const std::vector<double> R = riemann(ctx.s.chart, p, ctx.fd);
                               const auto frame = orthonormal_d_frame(ctx.s, p);
                               for (int k = 0; k < 2; ++k) {
                                   const Vec Z = sample_d_vector(ctx.s, p, gen);
                                   Vec resid(static_cast<std::size_t>(ctx.s.chart.dim), 0.0);
                                   for (const Vec& F : frame) {
                                       const Vec JF = mat_vec(phi, F);
                                       vec_axpy(1.0, riemann_apply(R, ctx.s.chart.dim, F, JF, Z),
                                                resid);
                                       vec_axpy(2.0, riemann_apply(R, ctx.s.chart.dim, Z, F, JF),
                                                resid);
                                   }
                                   acc.add(norm_g(g, resid));
                               }
                           }
                           return acc;
                       }});

        reg.push_back({"2.20", "(2.20)",
                       "rho-bar*(Z,W) = rho*(Z,W) + (2n-1)<Z,W> + 2(n-1)<hZ,W> - <hZ,hW>",
                       TolClass::d2, Applies::cm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           SampleGen gen = detail::identity_gen(ctx, "2.20");
                           const int d = ctx.s.chart.dim;
                           const double n = 0.5 * (d - 1);
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat rbar = star_ricci_bar_matrix(ctx.s, p, ctx.fd);
                               const Mat rstar = star_ricci_matrix(ctx.s, p, ctx.fd);
                               const Mat h = h_tensor(ctx.s, p, ctx.fd);
                               auto bilinear = [&](const Mat& M, const Vec& A, const Vec& B) {
                                   double v = 0.0;
                                   for (int i = 0; i < d; ++i)
                                       for (int j = 0; j < d; ++j) v += A[i] * M(i, j) * B[j];
                                   return v;
                               };
                               for (int k = 0; k < 2; ++k) {
                                   const Vec Z = sample_d_vector(ctx.s, p, gen);
                                   const Vec W = sample_d_vector(ctx.s, p, gen);
                                   const Vec hZ = mat_vec(h, Z), hW = mat_vec(h, W);
                                   const double resid =
                                       bilinear(rbar, Z, W) - bilinear(rstar, Z, W) -
                                       (2.0 * n - 1.0) * inner(g, Z, W) -
                                       2.0 * (n - 1.0) * inner(g, hZ, W) + inner(g, hZ, hW);
                                   acc.add(std::fabs(resid));
                               }
                           }
                           return acc;
                       }});

        reg.push_back({"2.21", "(2.21)", "trace(nabla_X h) = 0", TolClass::d1, Applies::cm, false,
                       false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           SampleGen gen = detail::identity_gen(ctx, "2.21");
                           const int d = ctx.s.chart.dim;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const TensorField hf = endo_field([&ctx](const Point& q) {
                                   return h_tensor(ctx.s, q, ctx.fd);
                               });
                               const std::vector<double> Dh =
                                   covariant_derivative_at(ctx.s.chart, hf, p, ctx.fd);
                               for (int k = 0; k < 2; ++k) {
                                   const Vec X = gen.unit_vector(g, d);
                                   double tr = 0.0;
                                   for (int i = 0; i < d; ++i)
                                       for (int c = 0; c < d; ++c)
                                           tr += Dh[(static_cast<std::size_t>(i) * d + i) * d + c] *
                                                 X[c];
                                   acc.add(std::fabs(tr));
                               }
                           }
                           return acc;
                       }});

        reg.push_back({"L2.3", "Lemma 2.3", "rho*(xi, Z) = -<delta h, J Z>", TolClass::d2,
                       Applies::cm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           SampleGen gen = detail::identity_gen(ctx, "L2.3");
                           const int d = ctx.s.chart.dim;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat rstar = star_ricci_matrix(ctx.s, p, ctx.fd);
                               const Vec dh = delta_h(ctx.s, p, ctx.fd);
                               const Mat phi = phi_at(ctx.s, p);
                               const Vec xi = xi_at(ctx.s, p);
                               for (int k = 0; k < 2; ++k) {
                                   const Vec Z = sample_d_vector(ctx.s, p, gen);
                                   double v = 0.0;
                                   for (int i = 0; i < d; ++i)
                                       for (int j = 0; j < d; ++j) v += xi[i] * rstar(i, j) * Z[j];
                                   acc.add(std::fabs(v + inner(g, dh, mat_vec(phi, Z))));
                               }
                           }
                           return acc;
                       }});

        reg.push_back({"T2.2", "Theorem 2.2",
                       "H-contact: harmonic verdict equals symmetry of rho* (0/1 agreement)",
                       TolClass::verdict, Applies::cm_h, false, false,
                       [](const IdentityContext& ctx) {
                           Accumulator acc;
                           const HarmonicityReport rep =
                               harmonic_report(ctx.s, ctx.points, ctx.fd, true);
                           double defect = 0.0;
                           for (const auto& p : ctx.points) {
                               const Mat rs = star_ricci_matrix(ctx.s, p, ctx.fd);
                               defect = std::max(defect, max_abs(rs - transpose(rs)));
                           }
                           const bool sym = defect < ctx.fd.tol_d2;
                           acc.add(rep.harmonic() == sym ? 0.0 : 1.0);
                           return acc;
                       }});

        reg.push_back({"remarkable", "Lemma 2.1 proof",
                       "four-term d Phi identity against -2<bar nabla_X J(Y) + bar nabla_{JX} J(JY), Z>",
                       TolClass::d2, Applies::acm, false, true, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           SampleGen gen = detail::identity_gen(ctx, "remarkable");
                           const int d = ctx.s.chart.dim;
                           const TensorField Phi = two_form_field([&ctx](const Point& q) {
                               return fundamental_two_form(ctx.s, q);
                           });
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat phi = phi_at(ctx.s, p);
                               const std::vector<double> dPhi =
                                   exterior_derivative(ctx.s.chart, Phi, p, ctx.fd);
                               auto dphi3 = [&](const Vec& A, const Vec& B, const Vec& C) {
                                   double v = 0.0;
                                   for (int i = 0; i < d; ++i)
                                       for (int j = 0; j < d; ++j)
                                           for (int k = 0; k < d; ++k)
                                               v += dPhi[(static_cast<std::size_t>(i) * d + j) * d +
                                                         k] *
                                                    A[i] * B[j] * C[k];
                                   return v;
                               };
                               for (int k = 0; k < 2; ++k) {
                                   const Vec X = sample_d_vector(ctx.s, p, gen);
                                   const Vec Y = sample_d_vector(ctx.s, p, gen);
                                   const Vec Z = sample_d_vector(ctx.s, p, gen);
                                   const Vec JX = mat_vec(phi, X), JY = mat_vec(phi, Y),
                                             JZ = mat_vec(phi, Z);
                                   const double lhs = dphi3(X, Y, Z) - dphi3(X, JY, JZ) +
                                                      dphi3(JX, JY, Z) + dphi3(JX, Y, JZ);
                                   Vec w = mat_vec(bar_J_derivative_endo(ctx.s, X, p, ctx.fd), Y);
                                   vec_axpy(1.0,
                                            mat_vec(bar_J_derivative_endo(ctx.s, JX, p, ctx.fd), JY),
                                            w);
                                   acc.add(std::fabs(lhs + 2.0 * inner(g, w, Z)));
                               }
                           }
                           return acc;
                       }});

        reg.push_back({"2.22", "(2.22)", "(kappa, mu)-nullity fit residual", TolClass::d2,
                       Applies::cm, false, false, [](const IdentityContext& ctx) {
                           const KappaMuFit fit =
                               kappa_mu_fit(ctx.s, ctx.points, ctx.fd, ctx.seed);
                           Accumulator acc;
                           acc.n = fit.samples;
                           acc.mx = fit.residual;
                           acc.sum = fit.residual * static_cast<double>(fit.samples);
                           return acc;
                       }});

        reg.push_back({"kappa_mu_recast", "Theorem 2.3 proof",
                       "[R(X,Y), phi] recast through (1+h) r (1+h) with the fitted (kappa, mu)",
                       TolClass::d2, Applies::cm, false, false, [](const IdentityContext& ctx) {
                           const KappaMuFit fit =
                               kappa_mu_fit(ctx.s, ctx.points, ctx.fd, ctx.seed);
                           if (fit.residual > 10.0 * ctx.fd.tol_d2)
                               throw NotApplicable("structure does not satisfy a (kappa,mu) nullity "
                                                   "condition");
                           Accumulator acc;
                           SampleGen gen = detail::identity_gen(ctx, "kappa_mu_recast");
                           const int d = ctx.s.chart.dim;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat phi = phi_at(ctx.s, p);
                               const Mat h = h_tensor(ctx.s, p, ctx.fd);
                               const Mat oph = Mat::identity(d) + h;
                               const Vec xi = xi_at(ctx.s, p);
                               const std::vector<double> R = riemann(ctx.s.chart, p, ctx.fd);
                               for (int k = 0; k < 2; ++k) {
                                   const Vec X = gen.raw_vector(d), Y = gen.raw_vector(d);
                                   const Vec Z = gen.raw_vector(d), W = gen.raw_vector(d);
                                   const Mat RXY = detail::riemann_endo(R, d, X, Y);
                                   const Mat rXY = detail::r_endo(g, X, Y);
                                   const Mat rZW = detail::r_endo(g, Z, W);
                                   const Mat lhsM = detail::commutator(RXY, phi);
                                   const Mat rhsM =
                                       detail::commutator(mat_mul(oph, mat_mul(rXY, oph)), phi);
                                   const double lhs = inner(g, mat_vec(lhsM, Z), W);
                                   double rhs = inner(g, mat_vec(rhsM, Z), W);
                                   const Vec rxy_xi = mat_vec(rXY, xi);
                                   const Vec phi_rzw_xi = mat_vec(phi, mat_vec(rZW, xi));
                                   rhs += (1.0 - fit.kappa) * inner(g, rxy_xi, phi_rzw_xi);
                                   rhs += (1.0 - fit.mu) *
                                          inner(g, mat_vec(h, rxy_xi), phi_rzw_xi);
                                   acc.add(std::fabs(lhs - rhs));
                               }
                           }
                           return acc;
                       }});

        reg.push_back({"eq1", "(1.1)", "first harmonic section equation tau(xi) + 1/2 J T(phi) = 0",
                       TolClass::d2, Applies::acm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               Vec v = tau_xi(ctx.s, p, ctx.fd);
                               vec_axpy(0.5, mat_vec(phi_at(ctx.s, p), T_phi(ctx.s, p, ctx.fd)), v);
                               acc.add(norm_g(g, v));
                           }
                           return acc;
                       }});

        reg.push_back({"eq2", "(1.2)", "second harmonic section equation [bar nabla* bar nabla J, J] = 0",
                       TolClass::d2, Applies::acm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               acc.add(endo_norm_g(g, spd_inverse(g), tau_J(ctx.s, p, ctx.fd)));
                           }
                           return acc;
                       }});

        reg.push_back({"tau_xi_D", "(1.1) context", "<tau(xi), xi> = 0 (tau(xi) lies in D)",
                       TolClass::d2, Applies::acm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               acc.add(std::fabs(
                                   inner(g, tau_xi(ctx.s, p, ctx.fd), xi_at(ctx.s, p))));
                           }
                           return acc;
                       }});

        reg.push_back({"delta_h_D", "Prop 2.1 lead-in", "<delta h, xi> = 0 (delta h lies in D)",
                       TolClass::d2, Applies::cm, false, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               acc.add(std::fabs(
                                   inner(g, delta_h(ctx.s, p, ctx.fd), xi_at(ctx.s, p))));
                           }
                           return acc;
                       }});

        reg.push_back({"nabla_phi_J_anti", "Lemma 2.1 remark",
                       "phi-anti-invariance of nabla phi (diagnostic; fails on Sasakian entries)",
                       TolClass::d1, Applies::acm, true, false, [](const IdentityContext& ctx) {
                           Accumulator acc;
                           SampleGen gen = detail::identity_gen(ctx, "nabla_phi_J_anti");
                           const int d = ctx.s.chart.dim;
                           for (const auto& p : ctx.points) {
                               const Mat g = metric_at(ctx.s.chart, p);
                               const Mat phi = phi_at(ctx.s, p);
                               const std::vector<double> Dphi = detail::nabla_phi(ctx.s, p, ctx.fd);
                               for (int k = 0; k < 2; ++k) {
                                   const Vec X = sample_d_vector(ctx.s, p, gen);
                                   const Vec Y = sample_d_vector(ctx.s, p, gen);
                                   const Vec JX = mat_vec(phi, X), JY = mat_vec(phi, Y);
                                   Vec resid = mat_vec(detail::contract_deriv(Dphi, d, JX), JY);
                                   vec_axpy(1.0, mat_vec(detail::contract_deriv(Dphi, d, X), Y),
                                            resid);
                                   acc.add(norm_g(g, resid));
                               }
                           }
                           return acc;
                       }});

        return reg;
    }();
    return registry;
}

inline const IdentityCheck& find_identity(const std::string& id) {
    for (const auto& c : identity_registry())
        if (c.id == id) return c;
    throw UnknownEntry("unknown identity id '" + id + "'");
}

inline bool identity_applicable(const IdentityCheck& check, const StructureClassification& cls) {
    switch (check.applies) {
        case IdentityCheck::Applies::acm:
            return true;
        case IdentityCheck::Applies::cm:
            return cls.is_contact_metric;
        case IdentityCheck::Applies::cm_h:
            return cls.is_contact_metric && cls.is_H_contact;
    }
    return false;
}

inline CheckRow check_identity(const IdentityCheck& check, const AlmostContactStructure& s,
                               const StructureClassification& cls,
                               const std::vector<Point>& points, const FDConfig& fd,
                               std::uint64_t seed, double tol_scale = 1.0,
                               bool require_applicable = false) {
    if (!identity_applicable(check, cls)) {
        if (require_applicable)
            throw NotApplicable("identity '" + check.id + "' is not applicable to '" + s.name + "'");
        return not_applicable_row(check.id, check.ref, check.description, check.tol_class, fd,
                                  tol_scale);
    }
    const IdentityContext ctx{s, cls, points, fd, seed};
    Accumulator acc;
    try {
        acc = check.run(ctx);
    } catch (const NotApplicable&) {
        if (require_applicable) throw;
        return not_applicable_row(check.id, check.ref, check.description, check.tol_class, fd,
                                  tol_scale);
    }
    const bool info =
        check.informational || (check.gate_requires_cm && !cls.is_contact_metric);
    return make_row(check.id, check.ref, check.description, check.tol_class, acc, fd, tol_scale,
                    info);
}

inline CheckRow check_identity(const std::string& id, const AlmostContactStructure& s,
                               const StructureClassification& cls,
                               const std::vector<Point>& points, const FDConfig& fd,
                               std::uint64_t seed, double tol_scale = 1.0,
                               bool require_applicable = true) {
    return check_identity(find_identity(id), s, cls, points, fd, seed, tol_scale,
                          require_applicable);
}

inline std::vector<CheckRow> run_identities(const AlmostContactStructure& s,
                                            const StructureClassification& cls,
                                            const std::vector<Point>& points, const FDConfig& fd,
                                            std::uint64_t seed, double tol_scale = 1.0,
                                            const std::vector<std::string>& only_ids = {}) {
    std::vector<CheckRow> rows;
    for (const auto& check : identity_registry()) {
        if (!only_ids.empty()) {
            bool wanted = false;
            for (const auto& id : only_ids) wanted = wanted || id == check.id;
            if (!wanted) continue;
        }
        rows.push_back(check_identity(check, s, cls, points, fd, seed, tol_scale, false));
    }
    return rows;
}

}  // namespace acharm
