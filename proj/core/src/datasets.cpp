#include "elavg/datasets.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace elavg {
namespace datasets {

namespace {

double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

} // namespace

WeightedPointCloud segment_uniform(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("segment_uniform: n must be >= 1");
    std::mt19937_64 eng(seed);
    std::vector<Vec> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        Vec p(2);
        p << uniform01(eng), 0.0;
        pts.push_back(std::move(p));
    }
    return WeightedPointCloud::with_unit_weights(std::move(pts));
}

WeightedPointCloud disk_uniform(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("disk_uniform: n must be >= 1");
    std::mt19937_64 eng(seed);
    std::vector<Vec> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double rho = std::sqrt(uniform01(eng));
        const double phi = 2 * M_PI * uniform01(eng);
        Vec p(2);
        p << rho * std::cos(phi), rho * std::sin(phi);
        pts.push_back(std::move(p));
    }
    return WeightedPointCloud(std::move(pts), std::vector<double>(n, 1.0 / n));
}

WeightedPointCloud circle(int n, double r) {
    if (n < 3) throw std::invalid_argument("circle: n must be >= 3");
    if (!(r > 0)) throw std::invalid_argument("circle: r must be > 0");
    std::vector<Vec> pts;
    pts.reserve(n);
    for (int j = 0; j < n; ++j) {
        const double phi = 2 * M_PI * (j + 0.5) / n;
        Vec p(2);
        p << r * std::cos(phi), r * std::sin(phi);
        pts.push_back(std::move(p));
    }
    return WeightedPointCloud(std::move(pts),
                              std::vector<double>(n, 2 * M_PI * r / n));
}

WeightedPointCloud corner_atoms() {
    Vec a(2), b(2), c(2);
    a << -1.0, 0.0;
    b << 0.0, 1.0;
    c << 1.0, 0.0;
    return WeightedPointCloud::with_unit_weights({a, b, c});
}

} // namespace datasets
} // namespace elavg
