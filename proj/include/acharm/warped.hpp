#pragma once

// Warped-product almost contact structures: base x_f line (xi = f^{-1} d_t)
// and line x_f fiber (xi = d_t), induced from an almost Hermitian factor.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "acharm/almost_contact.hpp"
#include "acharm/hermitian.hpp"

namespace acharm {

enum class WarpOrientation { base_times_line, line_times_fiber };

struct WarpedProductSpec {
    WarpOrientation orientation;
    AlmostHermitianStructure factor;  // base (for base_times_line) or fiber
    // Scalar warp field: on factor coordinates, or on the single line
    // coordinate t for line_times_fiber.
    TensorField warp;
    double line_lo = -0.5;
    double line_hi = 0.5;
};

namespace detail {

inline Point factor_point_base_line(const Point& p, int base_dim) {
    return Point(p.begin(), p.begin() + base_dim);
}

inline Point factor_point_line_fiber(const Point& p) { return Point(p.begin() + 1, p.end()); }

inline double positive_warp(const TensorField& warp, const Point& q) {
    const double f = warp.eval(q)[0];
    if (!(f > 0.0)) throw NonPositiveWarp("warp function is not strictly positive");
    return f;
}

}  // namespace detail

// M = base x_f R with metric g = g_base + f^2 dt^2, xi = f^{-1} d_t,
// eta = f dt, phi the lift of J; coordinates (base..., t).
inline AlmostContactStructure build_warped_base_times_line(const AlmostHermitianStructure& base,
                                                           const TensorField& warp,
                                                           double line_lo = -0.5,
                                                           double line_hi = 0.5) {
    const int bd = base.chart.dim;
    const int d = bd + 1;
    AlmostContactStructure s;
    s.name = base.name + "_x_line";

    Chart c;
    c.dim = d;
    c.name = s.name;
    c.domain = [base, bd](const Point& p) {
        return !base.chart.domain || base.chart.domain(detail::factor_point_base_line(p, bd));
    };
    c.metric = [base, warp, bd, d](const Point& p) {
        const Point q = detail::factor_point_base_line(p, bd);
        const Mat gb = metric_at(base.chart, q);
        const double f = detail::positive_warp(warp, q);
        Mat g(d);
        for (int i = 0; i < bd; ++i)
            for (int j = 0; j < bd; ++j) g(i, j) = gb(i, j);
        g(bd, bd) = f * f;
        return g;
    };
    c.box.lo = base.chart.box.lo;
    c.box.hi = base.chart.box.hi;
    c.box.lo.push_back(line_lo);
    c.box.hi.push_back(line_hi);
    s.chart = std::move(c);

    s.xi = vector_field([warp, bd, d](const Point& p) {
        const double f = detail::positive_warp(warp, detail::factor_point_base_line(p, bd));
        Vec v(static_cast<std::size_t>(d), 0.0);
        v[static_cast<std::size_t>(bd)] = 1.0 / f;
        return v;
    });
    s.eta = one_form_field([warp, bd, d](const Point& p) {
        const double f = detail::positive_warp(warp, detail::factor_point_base_line(p, bd));
        Vec v(static_cast<std::size_t>(d), 0.0);
        v[static_cast<std::size_t>(bd)] = f;
        return v;
    });
    s.phi = TensorField{{1, 1}, [base, bd, d](const Point& p) {
                            const Mat J = J_at(base, detail::factor_point_base_line(p, bd));
                            Mat m(d);
                            for (int i = 0; i < bd; ++i)
                                for (int j = 0; j < bd; ++j) m(i, j) = J(i, j);
                            return m.a;
                        }};
    return s;
}

// M = R x_f fiber with metric g = dt^2 + f(t)^2 g_fiber, xi = d_t,
// eta = dt, phi the lift of J; coordinates (t, fiber...).
inline AlmostContactStructure build_warped_line_times_fiber(const AlmostHermitianStructure& fiber,
                                                            const TensorField& warp,
                                                            double line_lo = -0.5,
                                                            double line_hi = 0.5) {
    const int fdim = fiber.chart.dim;
    const int d = fdim + 1;
    AlmostContactStructure s;
    s.name = "line_x_" + fiber.name;

    Chart c;
    c.dim = d;
    c.name = s.name;
    c.domain = [fiber](const Point& p) {
        return !fiber.chart.domain || fiber.chart.domain(detail::factor_point_line_fiber(p));
    };
    c.metric = [fiber, warp, fdim, d](const Point& p) {
        const Mat gf = metric_at(fiber.chart, detail::factor_point_line_fiber(p));
        const double f = detail::positive_warp(warp, {p[0]});
        Mat g(d);
        g(0, 0) = 1.0;
        for (int i = 0; i < fdim; ++i)
            for (int j = 0; j < fdim; ++j) g(i + 1, j + 1) = f * f * gf(i, j);
        return g;
    };
    c.box.lo.assign(1, line_lo);
    c.box.hi.assign(1, line_hi);
    c.box.lo.insert(c.box.lo.end(), fiber.chart.box.lo.begin(), fiber.chart.box.lo.end());
    c.box.hi.insert(c.box.hi.end(), fiber.chart.box.hi.begin(), fiber.chart.box.hi.end());
    s.chart = std::move(c);

    s.xi = vector_field([d](const Point&) {
        Vec v(static_cast<std::size_t>(d), 0.0);
        v[0] = 1.0;
        return v;
    });
    s.eta = one_form_field([d](const Point&) {
        Vec v(static_cast<std::size_t>(d), 0.0);
        v[0] = 1.0;
        return v;
    });
    s.phi = TensorField{{1, 1}, [fiber, fdim, d](const Point& p) {
                            const Mat J = J_at(fiber, detail::factor_point_line_fiber(p));
                            Mat m(d);
                            for (int i = 0; i < fdim; ++i)
                                for (int j = 0; j < fdim; ++j) m(i + 1, j + 1) = J(i, j);
                            return m.a;
                        }};
    return s;
}

inline AlmostContactStructure build_warped(const WarpedProductSpec& spec) {
    if (spec.orientation == WarpOrientation::base_times_line)
        return build_warped_base_times_line(spec.factor, spec.warp, spec.line_lo, spec.line_hi);
    return build_warped_line_times_fiber(spec.factor, spec.warp, spec.line_lo, spec.line_hi);
}

}  // namespace acharm
