#pragma once

// Shared chart fixtures for the unit tests.

#include <cmath>

#include "acharm/chart.hpp"

namespace acharm::testing {

inline Chart flat_chart(int dim) {
    Chart c;
    c.dim = dim;
    c.name = "flat" + std::to_string(dim);
    c.domain = [](const Point&) { return true; };
    c.metric = [dim](const Point&) { return Mat::identity(dim); };
    c.box.lo.assign(static_cast<std::size_t>(dim), -1.0);
    c.box.hi.assign(static_cast<std::size_t>(dim), 1.0);
    return c;
}

// Round unit 2-sphere, coordinates (theta, phi), away from the poles.
inline Chart sphere_chart() {
    Chart c;
    c.dim = 2;
    c.name = "sphere2";
    c.domain = [](const Point& p) { return p[0] > 0.2 && p[0] < M_PI - 0.2; };
    c.metric = [](const Point& p) {
        Mat g(2);
        g(0, 0) = 1.0;
        const double s = std::sin(p[0]);
        g(1, 1) = s * s;
        return g;
    };
    c.box.lo = {0.4, -1.5};
    c.box.hi = {2.7, 1.5};
    return c;
}

inline Chart exp_line_chart() {
    Chart c;
    c.dim = 1;
    c.name = "expline";
    c.domain = [](const Point&) { return true; };
    c.metric = [](const Point& p) {
        Mat g(1);
        g(0, 0) = std::exp(2.0 * p[0]);
        return g;
    };
    c.box.lo = {-0.8};
    c.box.hi = {0.8};
    return c;
}

// diag(1, f(t)^2) with f = exp(t); coordinates (t, y).
inline Chart warped_line_chart() {
    Chart c;
    c.dim = 2;
    c.name = "warpline";
    c.domain = [](const Point&) { return true; };
    c.metric = [](const Point& p) {
        Mat g(2);
        g(0, 0) = 1.0;
        const double f = std::exp(p[0]);
        g(1, 1) = f * f;
        return g;
    };
    c.box.lo = {-0.8, -0.8};
    c.box.hi = {0.8, 0.8};
    return c;
}

}  // namespace acharm::testing
