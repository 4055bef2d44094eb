#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace elavg {

using Vec = Eigen::VectorXd;

/// Weighted empirical measure: points in R^d (d >= 2) with nonnegative
/// weights. Total mass and support diameter are cached at construction;
/// the support is the set of points carrying positive weight.
class WeightedPointCloud {
public:
    WeightedPointCloud(std::vector<Vec> points, std::vector<double> weights);

    /// Every point gets weight 1.
    static WeightedPointCloud with_unit_weights(std::vector<Vec> points);

    const std::vector<Vec>& points() const noexcept { return points_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    Eigen::Index dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return points_.size(); }

    /// Sum of weights, accumulated in index order.
    double total_mass() const noexcept { return total_mass_; }

    /// Max pairwise distance over points with positive weight.
    double diameter() const noexcept { return diameter_; }

private:
    std::vector<Vec> points_;
    std::vector<double> weights_;
    Eigen::Index dim_ = 0;
    double total_mass_ = 0;
    double diameter_ = 0;
};

/// Discrete curve: ordered nodes in R^d. A single node is a valid
/// (degenerate) curve; with two or more nodes, consecutive nodes must be
/// distinct. Near-arc-length node spacing is maintained by the optimizer,
/// not by this type.
struct Polyline {
    std::vector<Vec> nodes;

    std::size_t size() const noexcept { return nodes.size(); }
    Eigen::Index dim() const noexcept {
        return nodes.empty() ? 0 : nodes.front().size();
    }
};

/// Throws std::invalid_argument if the polyline breaks its invariants
/// (empty, mixed dimensions, non-finite coordinates, zero-length edge).
void validate(const Polyline& curve);

/// Parameters (lambda, epsilon, p) plus the constants derived from the
/// cloud: D = 2 diam supp(mu), theta = p D^(p-1), and the tangent
/// Lipschitz bound Y = sqrt(2 (2 theta + lambda) / epsilon).
struct EnergyParams {
    double lambda = 0;
    double epsilon = 0;
    double p = 2;
    double diam = 0;
    double D = 0;
    double theta = 0;
    double Y = 0;

    /// Validates lambda > 0, epsilon > 0, p >= 1 and computes the derived
    /// constants from the cloud's support diameter.
    static EnergyParams for_cloud(const WeightedPointCloud& cloud,
                                  double lambda, double epsilon, double p);
};

/// Nearest-point assignment of one data point: segment index, parameter
/// t in [0,1] along that segment, the foot point and the distance.
struct ProjectionAssignment {
    Eigen::Index segment = 0;
    double t = 0;
    Vec foot;
    double distance = 0;
};

/// Total variation of the curve (sum of edge lengths); 0 for a singleton.
double length(const Polyline& curve);

/// Arc-length position of every node, starting at 0. Size = node count.
std::vector<double> cumulative_arc_lengths(const Polyline& curve);

/// Point of the curve at arc-length position s (clamped to [0, L]).
/// `cum` must be cumulative_arc_lengths(curve).
Vec point_at_arc_length(const Polyline& curve, const std::vector<double>& cum,
                        double s);

/// Unit tangent of each edge. Throws for curves with fewer than 2 nodes.
std::vector<Vec> tangents(const Polyline& curve);

/// Angle in [0, pi] between consecutive edge tangents, one per interior
/// node. Throws for curves with fewer than 3 nodes.
std::vector<double> turning_angles(const Polyline& curve);

/// Discrete integrated squared curvature: sum over interior nodes of
/// theta_k^2 / l_k with l_k the average of the two adjacent edge lengths.
/// 0 for curves with at most 2 nodes.
double discrete_curvature_term(const Polyline& curve);

/// Globally nearest point of the curve. Ties between segments are broken
/// toward the smaller segment index, then the smaller t. A singleton curve
/// projects everything onto its node (segment 0, t = 0).
ProjectionAssignment project_point(const Vec& y, const Polyline& curve);

/// project_point for every cloud point. May run in parallel (see
/// thread_budget()); the output is identical regardless of thread count.
std::vector<ProjectionAssignment> project_cloud(const WeightedPointCloud& cloud,
                                                const Polyline& curve);

/// Nodes at arc-length positions j * L / (n_nodes - 1) on the input curve;
/// endpoints are preserved exactly and targets landing within 1e-12 * L of
/// an input node snap to it, which makes the map idempotent on its own
/// output. Throws for curves of zero length.
Polyline resample(const Polyline& curve, int n_nodes);

/// Curve reversed end to end.
Polyline reversed(const Polyline& curve);

/// Distance on curve space: min over the two orientations of b of the
/// sup over n_samples constant-speed parameters of the pointwise distance,
/// plus |L(a) - L(b)|. A finite-sample approximation of the sup norm.
double curve_metric(const Polyline& a, const Polyline& b, int n_samples = 512);

struct ConfinementResult {
    bool ok = true;
    /// Max over nodes of (distance to support - allowed radius), clamped
    /// at 0; the allowed radius is diam + diam^p / lambda.
    double max_violation = 0;
};

/// Checks that every node lies within diam + diam^p / lambda of the
/// support of mu (nearest positive-weight point).
ConfinementResult confinement_check(const Polyline& curve,
                                    const WeightedPointCloud& cloud,
                                    const EnergyParams& params);

/// Collapses runs of nodes closer than tol, preserving both endpoints.
Polyline merge_close_nodes(const Polyline& curve, double tol);

/// Thread budget from ELASTIC_AVGDIST_THREADS (0 or unset = number of
/// hardware threads). Always at least 1.
int thread_budget();

} // namespace elavg
