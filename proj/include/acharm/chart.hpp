#pragma once

// A Chart is a single coordinate domain carrying a metric component field.
// Tensor component arrays are stored row-major with contravariant indices
// first and any covariant-derivative index appended last.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "acharm/errors.hpp"
#include "acharm/linalg.hpp"

namespace acharm {

struct FDConfig {
    double step = 1e-4;               // central-difference spacing, coordinate units
    int order = 2;                    // 2 or 4
    double tol_algebraic = 1e-12;     // pointwise algebra
    double tol_d1 = 1e-7;             // one-derivative identities
    double tol_d2 = 1e-5;             // curvature-level identities
};

struct SampleBox {
    Vec lo, hi;
};

struct Chart {
    int dim = 0;
    std::string name;
    std::function<bool(const Point&)> domain;
    std::function<Mat(const Point&)> metric;
    SampleBox box;  // sampling region, strictly inside the domain
};

struct Valence {
    int up = 0;
    int down = 0;
    int rank() const { return up + down; }
};

// A callable assigning coordinate-frame components to chart points.
// Component array length is dim^rank (length 1 for scalars).
struct TensorField {
    Valence val;
    std::function<std::vector<double>(const Point&)> eval;
};

inline TensorField scalar_field(std::function<double(const Point&)> f) {
    return TensorField{{0, 0}, [f = std::move(f)](const Point& p) {
                           return std::vector<double>{f(p)};
                       }};
}

inline TensorField vector_field(std::function<Vec(const Point&)> f) {
    return TensorField{{1, 0}, std::move(f)};
}

inline TensorField one_form_field(std::function<Vec(const Point&)> f) {
    return TensorField{{0, 1}, std::move(f)};
}

inline TensorField endo_field(std::function<Mat(const Point&)> f) {
    return TensorField{{1, 1}, [f = std::move(f)](const Point& p) { return f(p).a; }};
}

inline TensorField two_form_field(std::function<Mat(const Point&)> f) {
    return TensorField{{0, 2}, [f = std::move(f)](const Point& p) { return f(p).a; }};
}

// Constant-coefficient coordinate vector field through v.
inline TensorField constant_vector_field(Vec v) {
    return TensorField{{1, 0}, [v = std::move(v)](const Point&) { return v; }};
}

inline TensorField coordinate_vector_field(int dim, int axis) {
    Vec e(static_cast<std::size_t>(dim), 0.0);
    e[static_cast<std::size_t>(axis)] = 1.0;
    return constant_vector_field(std::move(e));
}

inline void require_in_domain(const Chart& chart, const Point& p) {
    if (chart.domain && !chart.domain(p))
        throw DomainViolation("point outside chart domain on '" + chart.name + "'");
}

inline Mat metric_at(const Chart& chart, const Point& p) {
    require_in_domain(chart, p);
    return chart.metric(p);
}

// xorshift-free 53-bit uniform driven by splitmix64; avoids the
// implementation-defined std::uniform_real_distribution so that seeded
// sampling is reproducible across toolchains.
class SampleGen {
  public:
    explicit SampleGen(std::uint64_t seed) : state_(seed) {}

    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    Point point_in(const SampleBox& box, double inset = 0.0) {
        Point p(box.lo.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] = uniform(box.lo[i] + inset, box.hi[i] - inset);
        return p;
    }

    // Components uniform in [-1, 1].
    Vec raw_vector(int dim) {
        Vec v(static_cast<std::size_t>(dim));
        for (auto& c : v) c = uniform(-1.0, 1.0);
        return v;
    }

    Vec unit_vector(const Mat& g, int dim) {
        for (;;) {
            Vec v = raw_vector(dim);
            const double n = norm_g(g, v);
            if (n > 0.2) return vec_scale(1.0 / n, v);
        }
    }

  private:
    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Seeded points for a chart, drawn inside the sample box with a margin so
// nested FD stencils stay in the domain.
inline std::vector<Point> sample_points(const Chart& chart, int count, std::uint64_t seed,
                                        const FDConfig& fd = {}) {
    SampleGen gen(seed ^ fnv1a(chart.name));
    const double inset = std::max(0.02, 8.0 * fd.step);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Point p = gen.point_in(chart.box, inset);
        require_in_domain(chart, p);
        pts.push_back(std::move(p));
    }
    return pts;
}

}  // namespace acharm
