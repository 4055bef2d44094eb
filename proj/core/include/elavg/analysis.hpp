#pragma once

#include "elavg/optimizer.hpp"

namespace elavg {

/// Discrete tangent Lipschitz estimate against the bound Y.
struct RegularityReport {
    double discrete_lipschitz = 0; // max_k |u_k - u_{k-1}| / l_k
    double Y = 0;
    double ratio = 0;
    double slack = 0.1;
    bool pass = true;
};

RegularityReport regularity_check(const Polyline& curve, const EnergyParams& params,
                                  double slack = 0.1);

/// Cloud scaled by r (weights unchanged) with lambda_r = r^(p-1) lambda and
/// epsilon_r = r^(p+1) epsilon, so the discrete energy scales by exactly
/// r^p and Y_r = Y / r.
struct ScaledProblem {
    WeightedPointCloud cloud;
    EnergyParams params;
};

ScaledProblem scaling_transform(const WeightedPointCloud& cloud,
                                const EnergyParams& params, double r);

Polyline scale_polyline(const Polyline& curve, double r);

/// Lebesgue measure of the unit ball in R^k (omega_k); omega_0 = 1.
double unit_ball_volume(int k);

/// Mass projecting onto a node range [first_node, last_node] of the curve,
/// against the right side of the projection estimate with exponent 1 - 1/q.
struct MassProjectionReport {
    std::size_t first_node = 0;
    std::size_t last_node = 0;
    double arc_length = 0;       // |t1 - t0| along the fitted curve
    double empirical_mass = 0;
    double q = 0;                // 0 stands for q = infinity
    double q_norm_estimate = 0;  // ||dmu/dL^d||_q supplied by the caller
    double bound_rhs = 0;
    bool pass = true;
    /// Weight collected by the arc-length Voronoi cell of each node.
    std::vector<double> node_masses;
    /// Index-order fold of all weights; equals cloud.total_mass() exactly.
    double total_projected_mass = 0;
};

/// q = 0 selects q = infinity (exponent 1). Throws on an empty interval.
MassProjectionReport mass_projection(const Polyline& curve,
                                     const WeightedPointCloud& cloud,
                                     const EnergyParams& params,
                                     std::size_t first_node, std::size_t last_node,
                                     double q_norm_estimate, double q = 0);

/// Weight collected by the arc-length Voronoi cell of each node (cell
/// boundaries at edge midpoints, ties to the smaller node index).
std::vector<double> node_projected_masses(const Polyline& curve,
                                          const WeightedPointCloud& cloud);

struct NodeMassSample {
    int n_nodes = 0;
    double max_interior_node_mass = 0;
};

/// Fits the cloud at each node count and reports the max projected mass
/// over interior nodes (over all nodes when the fit has fewer than 3).
std::vector<NodeMassSample> node_mass_refinement(const WeightedPointCloud& cloud,
                                                 const EnergyParams& params,
                                                 const std::vector<int>& node_counts,
                                                 const FitConfig& config);

/// Residual of the planar elastica equation the energy's critical curves
/// satisfy between knots, 2 epsilon kappa'' + epsilon kappa^3
/// - lambda kappa = 0, evaluated on knot-free interior runs of a fit.
/// Knots are nodes receiving projected mass above knot_tol * total_mass
/// (the node beside a knot is treated as loaded as well).
struct ElasticaResidualReport {
    double max_residual = 0;
    double knot_tol = 0;
    std::vector<std::size_t> knots;
    std::vector<std::size_t> residual_nodes;
    std::vector<double> residuals;        // aligned with residual_nodes
    std::vector<double> signed_curvature; // per node, 0 at endpoints
};

/// Throws unless the curve lives in R^2.
ElasticaResidualReport elastica_residual(const Polyline& curve,
                                         const WeightedPointCloud& cloud,
                                         const EnergyParams& params, double knot_tol);

/// Discrete energies of the two competitors for mu = n_samples equal-weight
/// points on the circle of radius r with total mass 2 pi r (p = 1): the
/// inscribed polygon through the samples, and the diameter segment.
/// Analytic values: circle 2 pi lambda r + 2 pi epsilon / r, segment
/// 4 r^2 + 2 lambda r.
struct CircleSegmentResult {
    double radius = 0;
    double lambda = 0;
    double epsilon = 0;
    int n_samples = 0;
    double circle_energy = 0;
    double segment_energy = 0;
    double circle_energy_analytic = 0;
    double segment_energy_analytic = 0;
};

CircleSegmentResult circle_vs_segment(double r, double lambda, double epsilon,
                                      int n_samples);

/// Radius where the heuristic circle and segment energies cross,
/// 2 pi lambda r + 2 pi epsilon / r = r (1 + 2 lambda), which scales as
/// sqrt(epsilon). Requires lambda < 1 / (2 pi - 2).
double crossover_radius(double lambda, double epsilon);

} // namespace elavg
