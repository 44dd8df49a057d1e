#pragma once

// Residual suites for the two warped-product families. Fiber-side traces
// carry the slice homothety factor: the t-slice of R x_f M carries f^2 times
// the fiber metric, so fiber Laplacian-type traces enter scaled by f^{-2}.

#include <cmath>
#include <string>
#include <vector>

#include "acharm/checks.hpp"
#include "acharm/harmonicity.hpp"
#include "acharm/hermitian.hpp"
#include "acharm/warped.hpp"

namespace acharm {

namespace detail {

// Derivative of a scalar field of one variable by central difference.
inline double scalar_derivative(const TensorField& f, double t, const FDConfig& fd) {
    return partial_along(f.eval, Point{t}, 0, fd)[0];
}

// Embed a fiber (or base) endomorphism into ambient warped coordinates.
inline Mat embed_endo(const Mat& inner_endo, int total_dim, int offset) {
    Mat out(total_dim);
    for (int i = 0; i < inner_endo.n; ++i)
        for (int j = 0; j < inner_endo.n; ++j) out(i + offset, j + offset) = inner_endo(i, j);
    return out;
}

inline Vec embed_vec(const Vec& v, int total_dim, int offset) {
    Vec out(static_cast<std::size_t>(total_dim), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) out[i + static_cast<std::size_t>(offset)] = v[i];
    return out;
}

}  // namespace detail

// Checks for M = base x_f R (xi = f^{-1} d_t): Lemma 3.3, (3.3)-(3.5),
// (3.7), the (3.9) pushforward and the Prop 3.2 correspondence
// pi_* [bar nabla* bar nabla J, J] = [nabla^* nabla^ J, J] + 2 f^{-1} J nabla^_{grad f} J.
inline std::vector<CheckRow> warp_suite_base_times_line(const WarpedProductSpec& spec,
                                                        const std::vector<Point>& points,
                                                        const FDConfig& fd,
                                                        std::uint64_t seed = 42,
                                                        double tol_scale = 1.0) {
    const AlmostHermitianStructure& base = spec.factor;
    const int bd = base.chart.dim;
    const AlmostContactStructure s = build_warped(spec);
    const int d = s.chart.dim;

    Accumulator tau0, tphi0, eq37, eq33, eq34, eq35, l331, l332, l333, eq39, p32;
    SampleGen gen(seed ^ fnv1a("warp_base_line"));

    for (const auto& p : points) {
        const Point bp = detail::factor_point_base_line(p, bd);
        const Mat g = metric_at(s.chart, p);
        const Mat ginv = spd_inverse(g);
        const Mat gb = metric_at(base.chart, bp);
        const Mat gbinv = spd_inverse(gb);
        const double f = spec.warp.eval(bp)[0];
        const Vec xi = xi_at(s, p);
        const Mat phi = phi_at(s, p);

        // gradient of f as a field on the total space (horizontal lift)
        const TensorField ftot = scalar_field([&spec, bd](const Point& q) {
            return spec.warp.eval(detail::factor_point_base_line(q, bd))[0];
        });
        const Vec gradf = gradient(s.chart, ftot, p, fd);
        const Vec gradf_base = gradient(base.chart, spec.warp, bp, fd);

        // Prop 3.1: tau(xi) = 0 and T(phi) = 0
        tau0.add(norm_g(g, tau_xi(s, p, fd)));
        tphi0.add(norm_g(g, T_phi(s, p, fd)));

        // (3.7) bar nabla_xi J = 0
        eq37.add(endo_norm_g(g, ginv, bar_J_derivative_endo(s, xi, p, fd)));

        // (3.3) nabla*nabla xi = f^{-2} |grad f|^2 xi
        {
            Vec resid = rough_laplacian(s.chart, s.xi, p, fd);
            vec_axpy(-inner(g, gradf, gradf) / (f * f), xi, resid);
            eq33.add(norm_g(g, resid));
        }

        // (3.4) nabla_X xi = 0 for horizontal X
        {
            const Mat dxi = detail::nabla_xi(s, p, fd);
            for (int a = 0; a < bd; ++a) {
                Vec col(static_cast<std::size_t>(d));
                for (int i = 0; i < d; ++i) col[i] = dxi(i, a);
                eq34.add(norm_g(g, col));
            }
        }

        // (3.5) nabla_xi xi = -f^{-1} grad f
        {
            const Mat dxi = detail::nabla_xi(s, p, fd);
            Vec resid = mat_vec(dxi, xi);
            vec_axpy(1.0 / f, gradf, resid);
            eq35.add(norm_g(g, resid));
        }

        // Lemma 3.3 (1): nabla_X V = nabla_V X = <X, f^{-1} grad f> V for
        // basic X = d_a, projectable vertical V = d_t
        {
            const TensorField dt = coordinate_vector_field(d, d - 1);
            const std::vector<double> Ddt = covariant_derivative_at(s.chart, dt, p, fd);
            for (int a = 0; a < bd; ++a) {
                Vec ea(static_cast<std::size_t>(d), 0.0);
                ea[static_cast<std::size_t>(a)] = 1.0;
                Vec lhs = contract_last(Ddt, d, ea);  // nabla_{d_a} d_t
                Vec vt(static_cast<std::size_t>(d), 0.0);
                vt[static_cast<std::size_t>(d - 1)] = 1.0;
                vec_axpy(-inner(g, ea, gradf) / f, vt, lhs);
                l331.add(norm_g(g, lhs));
                // torsion-free: nabla_{d_t} d_a equals nabla_{d_a} d_t
                const TensorField da = coordinate_vector_field(d, a);
                const std::vector<double> Dda = covariant_derivative_at(s.chart, da, p, fd);
                Vec lhs2 = contract_last(Dda, d, vt);
                vec_axpy(-inner(g, ea, gradf) / f, vt, lhs2);
                l331.add(norm_g(g, lhs2));
            }
        }

        // Lemma 3.3 (2): H(nabla_V W) = -<V,W> f^{-1} grad f for V = W = d_t
        {
            const TensorField dt = coordinate_vector_field(d, d - 1);
            const std::vector<double> Ddt = covariant_derivative_at(s.chart, dt, p, fd);
            Vec vt(static_cast<std::size_t>(d), 0.0);
            vt[static_cast<std::size_t>(d - 1)] = 1.0;
            Vec nvw = contract_last(Ddt, d, vt);
            // horizontal part = drop the t-component
            Vec horiz = nvw;
            horiz[static_cast<std::size_t>(d - 1)] = 0.0;
            vec_axpy(inner(g, vt, vt) / f, gradf, horiz);
            l332.add(norm_g(g, horiz));
        }

        // Lemma 3.3 (3): nabla_X Y = base nabla_X Y for basic horizontal
        // coordinate fields
        {
            for (int b = 0; b < bd; ++b) {
                const TensorField db_field = coordinate_vector_field(d, b);
                const std::vector<double> Ddb = covariant_derivative_at(s.chart, db_field, p, fd);
                const TensorField db_base = coordinate_vector_field(bd, b);
                const std::vector<double> Ddb_base =
                    covariant_derivative_at(base.chart, db_base, bp, fd);
                for (int a = 0; a < bd; ++a) {
                    Vec ea(static_cast<std::size_t>(d), 0.0);
                    ea[static_cast<std::size_t>(a)] = 1.0;
                    const Vec tot = contract_last(Ddb, d, ea);
                    Vec eab(static_cast<std::size_t>(bd), 0.0);
                    eab[static_cast<std::size_t>(a)] = 1.0;
                    const Vec basev = contract_last(Ddb_base, bd, eab);
                    Vec resid = tot;
                    for (int i = 0; i < bd; ++i) resid[i] -= basev[i];
                    l333.add(norm_g(g, resid));
                }
            }
        }

        // (3.9): pi_* bar nabla^2_{X,Y} J (Z) = nabla^2_{X^,Y^} J^ (Z^) for basic fields
        {
            const Vec Xb = gen.raw_vector(bd), Yb = gen.raw_vector(bd), Zb = gen.raw_vector(bd);
            const Vec X = detail::embed_vec(Xb, d, 0), Y = detail::embed_vec(Yb, d, 0);
            const Mat dd = bar_second_derivative_J(s, X, Y, p, fd);
            Vec lhs(static_cast<std::size_t>(bd), 0.0);
            {
                const Vec tmp = mat_vec(dd, detail::embed_vec(Zb, d, 0));
                for (int i = 0; i < bd; ++i) lhs[i] = tmp[i];
            }
            // base side: nabla^2_{X,Y} J contracted twice
            const TensorField DJ = covariant_derivative(base.chart, base.J, fd);
            const std::vector<double> DDJ = covariant_derivative_at(base.chart, DJ, bp, fd);
            const std::vector<double> inner2 =
                contract_last(contract_last(DDJ, bd, Xb), bd, Yb);
            const Vec rhs = mat_vec(endo_from_array(inner2, bd), Zb);
            eq39.add(max_abs(vec_sub(lhs, rhs)));
        }

        // Prop 3.2 correspondence
        {
            const Mat Ltot = bar_rough_laplacian_J(s, p, fd);
            const Mat lhs_tot = mat_mul(Ltot, phi) - mat_mul(phi, Ltot);
            Mat lhs(bd);
            for (int i = 0; i < bd; ++i)
                for (int j = 0; j < bd; ++j) lhs(i, j) = lhs_tot(i, j);

            const Mat Lb = hermitian_rough_laplacian_J(base, bp, fd);
            const Mat Jb = J_at(base, bp);
            Mat rhs = mat_mul(Lb, Jb) - mat_mul(Jb, Lb);
            const std::vector<double> DJb = covariant_derivative_at(base.chart, base.J, bp, fd);
            const Mat nabla_gradf_J = endo_from_array(contract_last(DJb, bd, gradf_base), bd);
            rhs = rhs + (2.0 / f) * mat_mul(Jb, nabla_gradf_J);
            p32.add(endo_norm_g(gb, gbinv, lhs - rhs));
        }
    }

    std::vector<CheckRow> rows;
    rows.push_back(make_row("W.tau_xi", "Prop 3.1", "tau(xi) = 0 on base x_f line", TolClass::d2,
                            tau0, fd, tol_scale));
    rows.push_back(make_row("W.T_phi", "Prop 3.1", "T(phi) = 0 on base x_f line", TolClass::d2,
                            tphi0, fd, tol_scale));
    rows.push_back(make_row("3.7", "(3.7)", "bar nabla_xi J = 0", TolClass::d1, eq37, fd, tol_scale));
    rows.push_back(make_row("3.3", "(3.3)", "nabla*nabla xi = f^{-2} |grad f|^2 xi", TolClass::d2,
                            eq33, fd, tol_scale));
    rows.push_back(make_row("3.4", "(3.4)", "nabla_X xi = 0 for basic horizontal X", TolClass::d1,
                            eq34, fd, tol_scale));
    rows.push_back(make_row("3.5", "(3.5)", "nabla_xi xi = -f^{-1} grad f", TolClass::d1, eq35, fd,
                            tol_scale));
    rows.push_back(make_row("L3.3.1", "Lemma 3.3 (1)", "nabla_X V = nabla_V X = <X, f^{-1} grad f> V",
                            TolClass::d1, l331, fd, tol_scale));
    rows.push_back(make_row("L3.3.2", "Lemma 3.3 (2)", "H(nabla_V W) = -<V,W> f^{-1} grad f",
                            TolClass::d1, l332, fd, tol_scale));
    rows.push_back(make_row("L3.3.3", "Lemma 3.3 (3)", "nabla_X Y equals the base nabla_X Y on basic fields",
                            TolClass::d1, l333, fd, tol_scale));
    rows.push_back(make_row("3.9", "(3.9)", "pushforward of bar nabla^2 J equals base nabla^2 J",
                            TolClass::d2, eq39, fd, tol_scale));
    rows.push_back(make_row("P3.2", "Prop 3.2",
                            "pi_*[bar nabla* bar nabla J, J] = [nabla^* nabla^ J, J] + 2 f^{-1} J "
                            "nabla^_{grad f} J",
                            TolClass::d2, p32, fd, tol_scale));
    return rows;
}

// Checks for M = R x_f fiber (xi = d_t): (3.10), (3.11), Lemma 3.5, the
// T(phi) / fiber delta J relation and the Laplacian correspondence of the
// Theorem 3.3 proof.
inline std::vector<CheckRow> warp_suite_line_times_fiber(const WarpedProductSpec& spec,
                                                         const std::vector<Point>& points,
                                                         const FDConfig& fd,
                                                         std::uint64_t seed = 42,
                                                         double tol_scale = 1.0) {
    const AlmostHermitianStructure& fiber = spec.factor;
    const int fdim = fiber.chart.dim;
    const AlmostContactStructure s = build_warped(spec);
    const int d = s.chart.dim;

    Accumulator tau0, e310a, e310b, e311, l333, l35a, l35b, tphi_rel, lap_rel;
    SampleGen gen(seed ^ fnv1a("warp_line_fiber"));

    for (const auto& p : points) {
        const Point fp = detail::factor_point_line_fiber(p);
        const Mat g = metric_at(s.chart, p);
        const Mat ginv = spd_inverse(g);
        const Mat gf = metric_at(fiber.chart, fp);
        const Mat gfinv = spd_inverse(gf);
        const double f = spec.warp.eval({p[0]})[0];
        const double fprime = detail::scalar_derivative(spec.warp, p[0], fd);
        const Vec xi = xi_at(s, p);
        const Mat phi = phi_at(s, p);

        // Prop 3.3 first part: tau(xi) = 0 for every fiber and warp
        tau0.add(norm_g(g, tau_xi(s, p, fd)));

        // (3.10a) nabla_X xi = f^{-1} f' X for vertical X
        {
            const Mat dxi = detail::nabla_xi(s, p, fd);
            for (int k = 0; k < 2; ++k) {
                const Vec Xf = gen.raw_vector(fdim);
                const Vec X = detail::embed_vec(Xf, d, 1);
                Vec resid = mat_vec(dxi, X);
                vec_axpy(-fprime / f, X, resid);
                e310a.add(norm_g(g, resid));
            }
        }

        // (3.10b) nabla_X X = -f^{-1} f' |X|^2 xi + fiber term, for fiber
        // coordinate fields on a flat fiber metric
        {
            for (int a = 0; a < fdim; ++a) {
                const TensorField da = coordinate_vector_field(d, a + 1);
                const std::vector<double> Dda = covariant_derivative_at(s.chart, da, p, fd);
                Vec ea(static_cast<std::size_t>(d), 0.0);
                ea[static_cast<std::size_t>(a + 1)] = 1.0;
                Vec resid = contract_last(Dda, d, ea);
                vec_axpy(fprime / f * inner(g, ea, ea), xi, resid);
                e310b.add(norm_g(g, resid));
            }
        }

        // (3.11) bar nabla_xi J = 0
        e311.add(endo_norm_g(g, ginv, bar_J_derivative_endo(s, xi, p, fd)));

        // Lemma 3.3 (3) with a one-dimensional base: nabla_{d_t} d_t = 0
        {
            const TensorField dt = coordinate_vector_field(d, 0);
            const std::vector<double> Ddt = covariant_derivative_at(s.chart, dt, p, fd);
            Vec et(static_cast<std::size_t>(d), 0.0);
            et[0] = 1.0;
            l333.add(norm_g(g, contract_last(Ddt, d, et)));
        }

        // Lemma 3.5: nabla_xi phi = 0 and bar nabla_X J (Y) = fiber nabla_X J (Y)
        {
            const std::vector<double> Dphi = detail::nabla_phi(s, p, fd);
            l35a.add(endo_norm_g(g, ginv, detail::contract_deriv(Dphi, d, xi)));
            const std::vector<double> DJf = covariant_derivative_at(fiber.chart, fiber.J, fp, fd);
            for (int k = 0; k < 2; ++k) {
                const Vec Xf = gen.raw_vector(fdim);
                const Vec Yf = gen.raw_vector(fdim);
                const Vec lhs_tot = mat_vec(
                    bar_J_derivative_endo(s, detail::embed_vec(Xf, d, 1), p, fd),
                    detail::embed_vec(Yf, d, 1));
                const Vec rhs_f = mat_vec(endo_from_array(contract_last(DJf, fdim, Xf), fdim), Yf);
                Vec resid = lhs_tot;
                vec_axpy(-1.0, detail::embed_vec(rhs_f, d, 1), resid);
                l35b.add(max_abs(resid));
            }
        }

        // T(phi) = -f^{-3} f' (fiber delta J), fiber trace in the fiber metric
        {
            const Vec tphi = T_phi(s, p, fd);
            const Vec dJf = hermitian_delta_J(fiber, fp, fd);
            Vec resid = tphi;
            vec_axpy(fprime / (f * f * f), detail::embed_vec(dJf, d, 1), resid);
            tphi_rel.add(norm_g(g, resid));
        }

        // bar nabla* bar nabla J = f^{-2} fiber nabla* nabla J
        {
            const Mat Ltot = bar_rough_laplacian_J(s, p, fd);
            const Mat Lf = hermitian_rough_laplacian_J(fiber, fp, fd);
            const Mat rhs = detail::embed_endo((1.0 / (f * f)) * Lf, d, 1);
            lap_rel.add(endo_norm_g(g, ginv, Ltot - rhs));
        }
    }

    std::vector<CheckRow> rows;
    rows.push_back(make_row("W.tau_xi", "Prop 3.3", "tau(xi) = 0 on line x_f fiber", TolClass::d2,
                            tau0, fd, tol_scale));
    rows.push_back(make_row("3.10a", "(3.10)", "nabla_X xi = f^{-1} f' X for vertical X",
                            TolClass::d1, e310a, fd, tol_scale));
    rows.push_back(make_row("3.10b", "(3.10)", "nabla_X X = -f^{-1} f' |X|^2 xi for projectable vertical X",
                            TolClass::d1, e310b, fd, tol_scale));
    rows.push_back(make_row("3.11", "(3.11)", "bar nabla_xi J = 0", TolClass::d1, e311, fd,
                            tol_scale));
    rows.push_back(make_row("L3.3.3", "Lemma 3.3 (3)", "the line factor is geodesic: nabla_{d_t} d_t = 0",
                            TolClass::d1, l333, fd, tol_scale));
    rows.push_back(make_row("L3.5a", "Lemma 3.5", "nabla_xi phi = 0", TolClass::d1, l35a, fd,
                            tol_scale));
    rows.push_back(make_row("L3.5b", "Lemma 3.5", "bar nabla_X J (Y) equals the fiber nabla_X J (Y)",
                            TolClass::d1, l35b, fd, tol_scale));
    rows.push_back(make_row("W.T_phi_rel", "Prop 3.3 proof",
                            "T(phi) = -f^{-3} f' delta J of the fiber", TolClass::d2, tphi_rel, fd,
                            tol_scale));
    rows.push_back(make_row("W.lap_rel", "Theorem 3.3 proof",
                            "bar nabla* bar nabla J = f^{-2} fiber nabla* nabla J", TolClass::d2,
                            lap_rel, fd, tol_scale));
    return rows;
}

inline std::vector<CheckRow> warp_theorem_suite(const WarpedProductSpec& spec,
                                                const std::vector<Point>& points,
                                                const FDConfig& fd, std::uint64_t seed = 42,
                                                double tol_scale = 1.0) {
    if (spec.orientation == WarpOrientation::base_times_line)
        return warp_suite_base_times_line(spec, points, fd, seed, tol_scale);
    return warp_suite_line_times_fiber(spec, points, fd, seed, tol_scale);
}

}  // namespace acharm
