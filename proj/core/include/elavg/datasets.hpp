#pragma once

#include "elavg/geometry.hpp"

#include <cstdint>

namespace elavg {
namespace datasets {

/// n unit-weight points uniform on the segment (0,0)-(1,0).
WeightedPointCloud segment_uniform(int n, std::uint64_t seed);

/// n points uniform on the unit disk, each of weight 1/n (total mass 1,
/// so the underlying density is 1/pi).
WeightedPointCloud disk_uniform(int n, std::uint64_t seed);

/// n equally spaced points on the circle of radius r, each of weight
/// 2 pi r / n (total mass = circumference).
WeightedPointCloud circle(int n, double r);

/// Three unit-weight atoms at (-1,0), (0,1), (1,0).
WeightedPointCloud corner_atoms();

} // namespace datasets
} // namespace elavg
