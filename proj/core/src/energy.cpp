#include "elavg/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elavg {

namespace {

double pow_p(double base, double p) {
    if (p == 2.0) return base * base;
    if (p == 1.0) return base;
    return std::pow(base, p);
}

// theta / sin(theta), continued through theta = 0 by its series.
double theta_over_sin(double theta) {
    if (theta < 1e-6) {
        const double t2 = theta * theta;
        return 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0;
    }
    return theta / std::sin(theta);
}

} // namespace

double distance_value(const WeightedPointCloud& cloud, double p,
                      const std::vector<ProjectionAssignment>& assignments) {
    double sum = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        sum += cloud.weights()[i] * pow_p(assignments[i].distance, p);
    return sum;
}

DistanceTerm distance_term(const WeightedPointCloud& cloud, const Polyline& curve,
                           double p) {
    DistanceTerm out;
    out.assignments = project_cloud(cloud, curve);
    out.value = distance_value(cloud, p, out.assignments);
    return out;
}

EnergyBreakdown total_energy(const WeightedPointCloud& cloud, const Polyline& curve,
                             const EnergyParams& params,
                             const std::vector<ProjectionAssignment>& assignments) {
    EnergyBreakdown out;
    out.distance_term = distance_value(cloud, params.p, assignments);
    out.length_term = params.lambda * length(curve);
    out.curvature_term = params.epsilon * discrete_curvature_term(curve);
    out.total = out.distance_term + out.length_term + out.curvature_term;
    return out;
}

EnergyBreakdown total_energy(const WeightedPointCloud& cloud, const Polyline& curve,
                             const EnergyParams& params) {
    return total_energy(cloud, curve, params, project_cloud(cloud, curve));
}

std::vector<Vec> gradient(const WeightedPointCloud& cloud, const Polyline& curve,
                          const EnergyParams& params,
                          const std::vector<ProjectionAssignment>& asg) {
    const std::size_t n = curve.size();
    if (n < 2)
        throw std::invalid_argument("gradient: need at least 2 nodes");
    const Eigen::Index d = curve.dim();

    std::vector<double> edge_len(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        edge_len[i] = (curve.nodes[i + 1] - curve.nodes[i]).norm();
        if (edge_len[i] < 1e-12)
            throw std::invalid_argument("gradient: degenerate edge at node " +
                                        std::to_string(i));
    }

    std::vector<Vec> g(n, Vec::Zero(d));

    // distance term: p w dist^(p-2) (foot - x) split (1-t, t) onto the
    // segment endpoints, assignment held fixed
    const double tol_dist = 1e-9 * cloud.diameter();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const ProjectionAssignment& a = asg[i];
        if (a.distance <= tol_dist) continue;
        const double w = cloud.weights()[i];
        if (w == 0) continue;
        double coeff;
        if (params.p == 2.0)
            coeff = 2.0 * w;
        else if (params.p == 1.0)
            coeff = w / a.distance;
        else
            coeff = params.p * w * std::pow(a.distance, params.p - 2.0);
        const Vec pull = coeff * (a.foot - cloud.points()[i]);
        g[a.segment] += (1.0 - a.t) * pull;
        g[a.segment + 1] += a.t * pull;
    }

    // length term: lambda (u_{k-1} - u_k) at each node
    std::vector<Vec> unit(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        unit[i] = (curve.nodes[i + 1] - curve.nodes[i]) / edge_len[i];
    g[0] -= params.lambda * unit[0];
    for (std::size_t k = 1; k + 1 < n; ++k)
        g[k] += params.lambda * (unit[k - 1] - unit[k]);
    g[n - 1] += params.lambda * unit[n - 2];

    // curvature term: d/dx of epsilon sum theta_k^2 / l_k
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double la = edge_len[k - 1];
        const double lb = edge_len[k];
        const Vec& ua = unit[k - 1];
        const Vec& ub = unit[k];
        const double c = std::clamp(ua.dot(ub), -1.0, 1.0);
        const double theta = std::acos(c);
        const double ell = 0.5 * (la + lb);

        const double dK_dc = -(2.0 / ell) * theta_over_sin(theta);
        const Vec dc_da = (ub - c * ua) / la;
        const Vec dc_db = (ua - c * ub) / lb;
        const double dK_dlen = -0.5 * theta * theta / (ell * ell);

        const Vec grad_a = dK_dc * dc_da + dK_dlen * ua;
        const Vec grad_b = dK_dc * dc_db + dK_dlen * ub;
        g[k - 1] -= params.epsilon * grad_a;
        g[k] += params.epsilon * (grad_a - grad_b);
        g[k + 1] += params.epsilon * grad_b;
    }
    return g;
}

std::vector<Vec> gradient(const WeightedPointCloud& cloud, const Polyline& curve,
                          const EnergyParams& params) {
    return gradient(cloud, curve, params, project_cloud(cloud, curve));
}

std::vector<Vec> fd_gradient(const WeightedPointCloud& cloud, const Polyline& curve,
                             const EnergyParams& params, double h) {
    if (!(h > 0))
        throw std::invalid_argument("fd_gradient: h must be > 0");
    Polyline work = curve;
    const Eigen::Index d = curve.dim();
    std::vector<Vec> g(curve.size(), Vec::Zero(d));
    for (std::size_t j = 0; j < curve.size(); ++j) {
        for (Eigen::Index c = 0; c < d; ++c) {
            const double saved = work.nodes[j][c];
            work.nodes[j][c] = saved + h;
            const double e_plus = total_energy(cloud, work, params).total;
            work.nodes[j][c] = saved - h;
            const double e_minus = total_energy(cloud, work, params).total;
            work.nodes[j][c] = saved;
            g[j][c] = (e_plus - e_minus) / (2 * h);
        }
    }
    return g;
}

} // namespace elavg
