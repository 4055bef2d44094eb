#pragma once

#include <elavg/geometry.hpp>

#include <cmath>
#include <random>

namespace testutil {

inline elavg::Vec v2(double x, double y) {
    elavg::Vec p(2);
    p << x, y;
    return p;
}

inline elavg::Polyline polyline2(std::initializer_list<std::pair<double, double>> nodes) {
    elavg::Polyline c;
    for (const auto& [x, y] : nodes) c.nodes.push_back(v2(x, y));
    return c;
}

inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

/// Open polyline tracing the full circle: nodes v_0..v_{N-1}, v_0 (N edges).
inline elavg::Polyline inscribed_polygon(int n, double r) {
    elavg::Polyline c;
    for (int j = 0; j <= n; ++j) {
        const double phi = 2 * M_PI * (j % n) / n;
        c.nodes.push_back(v2(r * std::cos(phi), r * std::sin(phi)));
    }
    return c;
}

/// Same traversal extended by one vertex so that every one of the N
/// polygon corners is an interior node (for curvature sums).
inline elavg::Polyline inscribed_polygon_wrapped(int n, double r) {
    elavg::Polyline c = inscribed_polygon(n, r);
    c.nodes.push_back(c.nodes[1]);
    return c;
}

} // namespace testutil
