#pragma once

#include "elavg/geometry.hpp"

namespace elavg {

/// The three summands of the energy. `total` is the floating-point sum
/// distance_term + length_term + curvature_term evaluated left to right.
struct EnergyBreakdown {
    double distance_term = 0;
    double length_term = 0;   // lambda * L
    double curvature_term = 0; // epsilon * sum theta^2 / l
    double total = 0;
};

struct DistanceTerm {
    double value = 0;
    std::vector<ProjectionAssignment> assignments;
};

/// Weighted p-th power distances from the cloud to the curve,
/// sum_i w_i * dist_i^p, accumulated in index order. The per-point
/// assignments are returned for reuse.
DistanceTerm distance_term(const WeightedPointCloud& cloud, const Polyline& curve,
                           double p);

/// Same sum over precomputed assignments.
double distance_value(const WeightedPointCloud& cloud, double p,
                      const std::vector<ProjectionAssignment>& assignments);

/// Full energy. Length and curvature terms are 0 for a singleton curve.
EnergyBreakdown total_energy(const WeightedPointCloud& cloud, const Polyline& curve,
                             const EnergyParams& params);

/// Full energy reusing assignments already projected onto `curve`.
EnergyBreakdown total_energy(const WeightedPointCloud& cloud, const Polyline& curve,
                             const EnergyParams& params,
                             const std::vector<ProjectionAssignment>& assignments);

/// Analytic gradient of the discrete energy with respect to node
/// positions. The projection assignment is held fixed (its change set has
/// measure zero); for p = 1 a point within 1e-9 * diam of the curve
/// contributes 0 (minimal-norm subgradient). Throws if the curve has
/// fewer than 2 nodes or an edge shorter than 1e-12.
std::vector<Vec> gradient(const WeightedPointCloud& cloud, const Polyline& curve,
                          const EnergyParams& params);

/// Gradient reusing assignments already projected onto `curve`.
std::vector<Vec> gradient(const WeightedPointCloud& cloud, const Polyline& curve,
                          const EnergyParams& params,
                          const std::vector<ProjectionAssignment>& assignments);

/// Central finite differences of total_energy, step h per coordinate.
/// Oracle for `gradient`; not meant to be fast.
std::vector<Vec> fd_gradient(const WeightedPointCloud& cloud, const Polyline& curve,
                             const EnergyParams& params, double h);

} // namespace elavg
