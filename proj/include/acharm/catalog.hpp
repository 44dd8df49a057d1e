#pragma once

// Built-in example structures: the flat testing chart, Darboux-type Sasakian
// spaces, unit tangent bundles of constant-curvature surfaces, warped
// products, a Heisenberg-to-plane submersion, and controlled perturbations
// that break harmonicity while preserving the structure axioms.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "acharm/almost_contact.hpp"
#include "acharm/expr.hpp"
#include "acharm/hermitian.hpp"
#include "acharm/submersion.hpp"
#include "acharm/warped.hpp"

namespace acharm {

using Params = std::map<std::string, std::string>;

struct ParamSpec {
    std::string name;
    std::string default_value;
    std::string doc;
};

struct CatalogEntry {
    std::string key;
    std::string kind;  // "almost_contact", "hermitian", "submersion"
    std::string summary;
    std::vector<ParamSpec> params;
    // expectations used by list/describe and confirmed by tests: -1 n/a
    int expect_contact_metric = -1;
    int expect_K_contact = -1;
    int expect_H_contact = -1;
    int expect_harmonic = -1;
};

inline const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries{
        {"euclidean", "almost_contact",
         "flat R^3 with the standard product structure (testing baseline)", {}, 0, 1, 1, 1},
        {"sasakian_R3", "almost_contact",
         "Darboux-type Sasakian structure on R^3 (Heisenberg group)", {}, 1, 1, 1, 1},
        {"sasakian_R2n1", "almost_contact",
         "Darboux-type Sasakian structure on R^5", {}, 1, 1, 1, 1},
        {"unit_tangent_surface", "almost_contact",
         "standard contact metric structure on the unit tangent bundle of a "
         "constant-curvature surface (conformal model)",
         {{"c", "1", "constant curvature of the base surface, in [-5, 10]"}},
         1, -1, 1, 1},
        {"kenmotsu", "almost_contact",
         "R x_{e^t} flat Kaehler R^2 (Kenmotsu structure)", {}, 0, 1, 1, 1},
        {"warped_base_line", "almost_contact",
         "flat Kaehler R^2 x_f R with xi = f^{-1} d_t",
         {{"f", "1+x^2/4", "warp expression in the base coordinates x, y (positive)"}},
         0, -1, 1, 1},
        {"warped_line_fiber", "almost_contact",
         "R x_f fiber with xi = d_t",
         {{"f", "exp(t/3)", "warp expression in t (positive)"},
          {"fiber", "kahler_R2", "fiber key: kahler_R2 or perturbed_hermitian_R4"}},
         0, 1, 1, -1},
        {"heisenberg_submersion", "submersion",
         "Sasakian R^3 fibred over the flat Kaehler plane, pi(x,y,z) = (x,y)", {}, 1, 1, 1, 1},
        {"kahler_R2", "hermitian", "flat Kaehler plane", {}, -1, -1, -1, 1},
        {"perturbed_hermitian_R4", "hermitian",
         "flat R^4 with a rotated, non-cosymplectic almost complex structure", {}, -1, -1, -1, 0},
    };
    return entries;
}

inline const CatalogEntry& find_entry(const std::string& key) {
    for (const auto& e : catalog_entries())
        if (e.key == key) return e;
    throw UnknownEntry("unknown catalog entry '" + key + "'");
}

namespace detail {

inline double param_double(const Params& params, const std::string& name, double fallback) {
    const auto it = params.find(name);
    if (it == params.end()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ParamOutOfRange("parameter '" + name + "' is not a number: '" + it->second + "'");
    }
}

inline std::string param_string(const Params& params, const std::string& name,
                                const std::string& fallback) {
    const auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
}

// Warp expression compiled over named coordinates.
inline TensorField warp_field(const std::string& expression,
                              const std::vector<std::string>& names) {
    dsl::CompiledExpr compiled;
    try {
        compiled = dsl::CompiledExpr::compile(*dsl::parse_expression(expression), names);
    } catch (const ParseError& e) {
        throw ParamOutOfRange("warp expression '" + expression + "': " + e.what());
    } catch (const UnboundVariable& e) {
        throw ParamOutOfRange("warp expression '" + expression + "': " + e.what());
    }
    return scalar_field([compiled](const Point& q) { return compiled.eval(q.data(), q.size()); });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// almost Hermitian entries

inline AlmostHermitianStructure kahler_plane(double metric_scale = 1.0, double orientation = 1.0,
                                             const std::string& name = "kahler_R2") {
    AlmostHermitianStructure h;
    h.name = name;
    h.chart.dim = 2;
    h.chart.name = name;
    h.chart.domain = [](const Point&) { return true; };
    h.chart.metric = [metric_scale](const Point&) { return metric_scale * Mat::identity(2); };
    h.chart.box.lo = {-0.5, -0.5};
    h.chart.box.hi = {0.5, 0.5};
    h.J = endo_field([orientation](const Point&) {
        Mat J(2);
        J(1, 0) = orientation;   // J d_x = +/- d_y
        J(0, 1) = -orientation;  // J d_y = -/+ d_x
        return J;
    });
    return h;
}

// Flat R^4 whose complex structure is rotated pointwise in the (x1,x3)
// plane by alpha(p); delta J != 0, so the structure is not cosymplectic.
inline AlmostHermitianStructure perturbed_hermitian_r4() {
    AlmostHermitianStructure h;
    h.name = "perturbed_hermitian_R4";
    h.chart.dim = 4;
    h.chart.name = h.name;
    h.chart.domain = [](const Point&) { return true; };
    h.chart.metric = [](const Point&) { return Mat::identity(4); };
    h.chart.box.lo.assign(4, -0.5);
    h.chart.box.hi.assign(4, 0.5);
    h.J = endo_field([](const Point& p) {
        const double alpha = 0.35 * std::sin(p[0]) + 0.25 * p[1];
        Mat J0(4);
        J0(1, 0) = 1.0;
        J0(0, 1) = -1.0;
        J0(3, 2) = 1.0;
        J0(2, 3) = -1.0;
        Mat G(4);  // rotation generator in the (x1, x3) plane
        G(2, 0) = 1.0;
        G(0, 2) = -1.0;
        Mat G2(4);
        G2(0, 0) = -1.0;
        G2(2, 2) = -1.0;
        const Mat R = Mat::identity(4) + std::sin(alpha) * G + (1.0 - std::cos(alpha)) * G2;
        return mat_mul(R, mat_mul(J0, transpose(R)));
    });
    return h;
}

inline AlmostHermitianStructure catalog_hermitian(const std::string& key, const Params& = {}) {
    if (key == "kahler_R2") return kahler_plane();
    if (key == "perturbed_hermitian_R4") return perturbed_hermitian_r4();
    throw UnknownEntry("unknown hermitian entry '" + key + "'");
}

// ---------------------------------------------------------------------------
// almost contact entries

inline AlmostContactStructure euclidean_structure() {
    AlmostContactStructure s;
    s.name = "euclidean";
    s.chart.dim = 3;
    s.chart.name = s.name;
    s.chart.domain = [](const Point&) { return true; };
    s.chart.metric = [](const Point&) { return Mat::identity(3); };
    s.chart.box.lo = {-1.0, -1.0, -1.0};
    s.chart.box.hi = {1.0, 1.0, 1.0};
    s.xi = vector_field([](const Point&) { return Vec{0.0, 0.0, 1.0}; });
    s.eta = one_form_field([](const Point&) { return Vec{0.0, 0.0, 1.0}; });
    s.phi = endo_field([](const Point&) {
        Mat m(3);
        m(1, 0) = 1.0;
        m(0, 1) = -1.0;
        return m;
    });
    return s;
}

// eta = 1/2 (dz - y dx), xi = 2 d_z, g = eta (x) eta + 1/4 (dx^2 + dy^2),
// phi d_y = d_x + y d_z, phi d_x = -d_y.
inline AlmostContactStructure sasakian_r3() {
    AlmostContactStructure s;
    s.name = "sasakian_R3";
    s.chart.dim = 3;
    s.chart.name = s.name;
    s.chart.domain = [](const Point&) { return true; };
    s.chart.metric = [](const Point& p) {
        const double y = p[1];
        Mat g(3);
        g(0, 0) = 0.25 * (y * y + 1.0);
        g(0, 2) = -0.25 * y;
        g(2, 0) = -0.25 * y;
        g(1, 1) = 0.25;
        g(2, 2) = 0.25;
        return g;
    };
    s.chart.box.lo = {-0.8, -0.8, -0.8};
    s.chart.box.hi = {0.8, 0.8, 0.8};
    s.xi = vector_field([](const Point&) { return Vec{0.0, 0.0, 2.0}; });
    s.eta = one_form_field([](const Point& p) { return Vec{-0.5 * p[1], 0.0, 0.5}; });
    s.phi = endo_field([](const Point& p) {
        Mat m(3);
        m(1, 0) = -1.0;  // phi d_x = -d_y
        m(0, 1) = 1.0;   // phi d_y = d_x + y d_z
        m(2, 1) = p[1];
        return m;
    });
    return s;
}

// Dimension-5 Darboux structure, coordinates (x1, y1, x2, y2, z).
inline AlmostContactStructure sasakian_r5() {
    AlmostContactStructure s;
    s.name = "sasakian_R2n1";
    s.chart.dim = 5;
    s.chart.name = s.name;
    s.chart.domain = [](const Point&) { return true; };
    auto eta_of = [](const Point& p) {
        return Vec{-0.5 * p[1], 0.0, -0.5 * p[3], 0.0, 0.5};
    };
    s.chart.metric = [eta_of](const Point& p) {
        const Vec eta = eta_of(p);
        Mat g(5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) g(i, j) = eta[i] * eta[j];
        for (int i = 0; i < 4; ++i) g(i, i) += 0.25;
        return g;
    };
    s.chart.box.lo.assign(5, -0.7);
    s.chart.box.hi.assign(5, 0.7);
    s.xi = vector_field([](const Point&) { return Vec{0.0, 0.0, 0.0, 0.0, 2.0}; });
    s.eta = one_form_field(eta_of);
    s.phi = endo_field([](const Point& p) {
        Mat m(5);
        m(1, 0) = -1.0;  // phi d_x1 = -d_y1
        m(0, 1) = 1.0;   // phi d_y1 = d_x1 + y1 d_z
        m(4, 1) = p[1];
        m(3, 2) = -1.0;  // phi d_x2 = -d_y2
        m(2, 3) = 1.0;   // phi d_y2 = d_x2 + y2 d_z
        m(4, 3) = p[3];
        return m;
    });
    return s;
}

// Unit tangent bundle of the constant-curvature-c surface in the conformal
// model, coordinates (x, y, theta). Sasaki metric scaled by 1/4, xi twice
// the geodesic flow field; the scaling is fixed by the contact metric gate.
inline AlmostContactStructure unit_tangent_surface(double c) {
    if (!(c >= -5.0 && c <= 10.0))
        throw ParamOutOfRange("unit_tangent_surface: c must lie in [-5, 10]");
    AlmostContactStructure s;
    s.name = "unit_tangent_surface(c=" + std::to_string(c) + ")";
    s.chart.dim = 3;
    s.chart.name = s.name;
    s.chart.domain = [c](const Point& p) {
        return 1.0 + 0.25 * c * (p[0] * p[0] + p[1] * p[1]) > 0.3;
    };

    struct Frame {
        double lam, sx, sy, ct, st;
    };
    auto frame_at = [c](const Point& p) {
        Frame f;
        const double r2 = p[0] * p[0] + p[1] * p[1];
        f.lam = 1.0 / (1.0 + 0.25 * c * r2);
        f.sx = -0.5 * c * p[0] * f.lam;
        f.sy = -0.5 * c * p[1] * f.lam;
        f.ct = std::cos(p[2]);
        f.st = std::sin(p[2]);
        return f;
    };

    s.chart.metric = [frame_at](const Point& p) {
        const Frame f = frame_at(p);
        const Vec v{-f.sy, f.sx, 1.0};  // vertical coform of the Sasaki metric
        Mat g(3);
        g(0, 0) = f.lam * f.lam;
        g(1, 1) = f.lam * f.lam;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) += v[i] * v[j];
        return 0.25 * g;
    };
    s.chart.box.lo = {-0.3, -0.3, -1.2};
    s.chart.box.hi = {0.3, 0.3, 1.2};

    s.xi = vector_field([frame_at](const Point& p) {
        const Frame f = frame_at(p);
        return Vec{2.0 * f.ct / f.lam, 2.0 * f.st / f.lam,
                   2.0 * (f.ct * f.sy - f.st * f.sx) / f.lam};
    });
    s.eta = one_form_field([frame_at](const Point& p) {
        const Frame f = frame_at(p);
        return Vec{0.5 * f.lam * f.ct, 0.5 * f.lam * f.st, 0.0};
    });
    s.phi = endo_field([frame_at](const Point& p) {
        const Frame f = frame_at(p);
        // horizontal and vertical lifts of the rotated unit vector
        const Vec ph{-f.st / f.lam, f.ct / f.lam, -(f.st * f.sy + f.ct * f.sx) / f.lam};
        const Vec pv{0.0, 0.0, 1.0};
        const Vec gph{-f.lam * f.st, f.lam * f.ct, 0.0};  // Sasaki-metric dual of ph
        const Vec gpv{-f.sy, f.sx, 1.0};                  // Sasaki-metric dual of pv
        Mat m(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = pv[i] * gph[j] - ph[i] * gpv[j];
        return m;
    });
    return s;
}

inline WarpedProductSpec catalog_warp_spec(const std::string& key, const Params& params = {}) {
    if (key == "kenmotsu") {
        WarpedProductSpec spec;
        spec.orientation = WarpOrientation::line_times_fiber;
        spec.factor = kahler_plane();
        spec.warp = detail::warp_field("exp(t)", {"t"});
        return spec;
    }
    if (key == "warped_base_line") {
        WarpedProductSpec spec;
        spec.orientation = WarpOrientation::base_times_line;
        spec.factor = kahler_plane();
        spec.warp = detail::warp_field(detail::param_string(params, "f", "1+x^2/4"), {"x", "y"});
        return spec;
    }
    if (key == "warped_line_fiber") {
        WarpedProductSpec spec;
        spec.orientation = WarpOrientation::line_times_fiber;
        spec.factor = catalog_hermitian(detail::param_string(params, "fiber", "kahler_R2"));
        spec.warp = detail::warp_field(detail::param_string(params, "f", "exp(t/3)"), {"t"});
        return spec;
    }
    throw UnknownEntry("'" + key + "' is not a warped-product entry");
}

inline SubmersionSetup catalog_submersion(const std::string& key, const Params& = {}) {
    if (key != "heisenberg_submersion")
        throw UnknownEntry("'" + key + "' is not a submersion entry");
    SubmersionSetup setup;
    setup.name = key;
    setup.total = sasakian_r3();
    setup.base = kahler_plane(0.25, -1.0, "kahler_R2_quarter");
    setup.projection = [](const Point& p) { return Point{p[0], p[1]}; };
    setup.differential = [](const Point&, const Vec& v) { return Vec{v[0], v[1]}; };
    return setup;
}

inline AlmostContactStructure catalog_structure(const std::string& key, const Params& params = {}) {
    const CatalogEntry& entry = find_entry(key);
    if (entry.kind == "hermitian")
        throw UnknownEntry("'" + key + "' is an almost Hermitian entry; use catalog_hermitian");
    if (entry.kind == "submersion") return catalog_submersion(key, params).total;
    if (key == "euclidean") return euclidean_structure();
    if (key == "sasakian_R3") return sasakian_r3();
    if (key == "sasakian_R2n1") return sasakian_r5();
    if (key == "unit_tangent_surface")
        return unit_tangent_surface(detail::param_double(params, "c", 1.0));
    // warped entries
    AlmostContactStructure s = build_warped(catalog_warp_spec(key, params));
    s.name = key;
    s.chart.name = key;
    if (key == "warped_line_fiber")
        s.name += "(fiber=" + detail::param_string(params, "fiber", "kahler_R2") + ")";
    return s;
}

// ---------------------------------------------------------------------------
// controlled perturbation

// Rotates the whole triple (xi, eta, phi) by a seed-deterministic field of
// g-orthogonal rotations exp(theta(p) K(p)) in the plane spanned by xi and
// a seeded D-direction, with theta supported in a bump around the box
// centre. Every structure axiom survives exactly; harmonicity does not.
//
// Rotations fixing xi would be useless here: they preserve D, and on a
// 2-dimensional D every g-orthogonal rotation commutes with phi, so phi
// itself is rigid once (g, xi, eta) are held fixed.
inline AlmostContactStructure perturb(const AlmostContactStructure& s, double epsilon,
                                      std::uint64_t seed) {
    if (!(epsilon >= 0.0 && epsilon < 0.1))
        throw EpsilonOutOfRange("perturb: epsilon must lie in [0, 0.1)");
    if (epsilon == 0.0) return s;

    const int d = s.chart.dim;
    SampleGen gen(seed ^ fnv1a("perturb:" + s.name));
    Vec u0;
    // deterministic retry until the projected direction stays well-conditioned
    // at seeded probe points
    for (int attempt = 0;; ++attempt) {
        u0 = gen.raw_vector(d);
        SampleGen probe(seed ^ fnv1a("perturb-probe:" + s.name));
        bool ok = true;
        for (int k = 0; k < 12 && ok; ++k) {
            const Point q = probe.point_in(s.chart.box);
            if (norm_g(metric_at(s.chart, q), d_project(s, u0, q)) < 0.3) ok = false;
        }
        if (ok) break;
        if (attempt == 63) throw Error("perturb: could not find a well-conditioned direction");
    }

    const SampleBox box = s.chart.box;
    const AlmostContactStructure base = s;  // capture by value for field closures

    // rotation field and its inverse
    auto rotation = [base, u0, epsilon, box, d](const Point& p, double sign) {
        double s2 = 0.0;
        for (int i = 0; i < d; ++i) {
            const double c = 0.5 * (box.lo[i] + box.hi[i]);
            const double w = 1.2 * 0.5 * (box.hi[i] - box.lo[i]) * std::sqrt(static_cast<double>(d));
            const double t = (p[i] - c) / w;
            s2 += t * t;
        }
        if (s2 >= 1.0) return Mat::identity(d);
        const double theta = sign * epsilon * std::exp(1.0 - 1.0 / (1.0 - s2));

        const Mat g = metric_at(base.chart, p);
        const Vec xi = xi_at(base, p);
        Vec u = d_project(base, u0, p);
        u = vec_scale(1.0 / norm_g(g, u), u);

        const Vec xib = mat_vec(g, xi), ub = mat_vec(g, u);
        Mat K(d), K2(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                K(i, j) = xi[i] * ub[j] - u[i] * xib[j];
                K2(i, j) = -(xi[i] * xib[j] + u[i] * ub[j]);
            }
        return Mat::identity(d) + std::sin(theta) * K + (1.0 - std::cos(theta)) * K2;
    };

    AlmostContactStructure out = s;
    out.name = s.name + "#perturbed";
    const TensorField xi0 = s.xi, eta0 = s.eta, phi0 = s.phi;
    out.xi = vector_field([rotation, xi0](const Point& p) {
        return mat_vec(rotation(p, 1.0), xi0.eval(p));
    });
    out.eta = one_form_field([rotation, eta0, d](const Point& p) {
        const Mat Ainv = rotation(p, -1.0);
        const Vec eta = eta0.eval(p);
        Vec outv(static_cast<std::size_t>(d), 0.0);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) outv[j] += eta[i] * Ainv(i, j);
        return outv;
    });
    out.phi = TensorField{{1, 1}, [rotation, phi0, d](const Point& p) {
                              const Mat A = rotation(p, 1.0);
                              const Mat Ainv = rotation(p, -1.0);
                              return mat_mul(A, mat_mul(endo_from_array(phi0.eval(p), d), Ainv)).a;
                          }};
    return out;
}

}  // namespace acharm
