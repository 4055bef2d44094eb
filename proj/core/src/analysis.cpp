#include "elavg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elavg {

RegularityReport regularity_check(const Polyline& curve, const EnergyParams& params,
                                  double slack) {
    RegularityReport rep;
    rep.Y = params.Y;
    rep.slack = slack;
    if (curve.size() >= 3) {
        const std::vector<Vec> u = tangents(curve);
        double prev_len = (curve.nodes[1] - curve.nodes[0]).norm();
        for (std::size_t k = 1; k + 1 < curve.nodes.size(); ++k) {
            const double next_len = (curve.nodes[k + 1] - curve.nodes[k]).norm();
            const double ell = 0.5 * (prev_len + next_len);
            rep.discrete_lipschitz =
                std::max(rep.discrete_lipschitz, (u[k] - u[k - 1]).norm() / ell);
            prev_len = next_len;
        }
    }
    rep.ratio = rep.discrete_lipschitz / rep.Y;
    rep.pass = rep.ratio <= 1.0 + slack;
    return rep;
}

ScaledProblem scaling_transform(const WeightedPointCloud& cloud,
                                const EnergyParams& params, double r) {
    if (!(r > 0))
        throw std::invalid_argument("scaling_transform: r must be > 0");
    std::vector<Vec> pts;
    pts.reserve(cloud.size());
    for (const Vec& x : cloud.points()) pts.push_back(r * x);
    WeightedPointCloud scaled(std::move(pts), cloud.weights());
    const double lambda_r = std::pow(r, params.p - 1) * params.lambda;
    const double epsilon_r = std::pow(r, params.p + 1) * params.epsilon;
    EnergyParams params_r =
        EnergyParams::for_cloud(scaled, lambda_r, epsilon_r, params.p);
    return ScaledProblem{std::move(scaled), params_r};
}

Polyline scale_polyline(const Polyline& curve, double r) {
    Polyline out = curve;
    for (Vec& node : out.nodes) node *= r;
    return out;
}

double unit_ball_volume(int k) {
    if (k < 0) throw std::invalid_argument("unit_ball_volume: negative dimension");
    return std::pow(M_PI, k / 2.0) / std::tgamma(k / 2.0 + 1.0);
}

namespace {

// arc-length position of every projected foot
std::vector<double> foot_positions(const Polyline& curve,
                                   const WeightedPointCloud& cloud,
                                   const std::vector<double>& cum) {
    const std::vector<ProjectionAssignment> asg = project_cloud(cloud, curve);
    std::vector<double> s(asg.size());
    for (std::size_t i = 0; i < asg.size(); ++i) {
        const std::size_t seg = static_cast<std::size_t>(asg[i].segment);
        const double seg_len = seg + 1 < cum.size() ? cum[seg + 1] - cum[seg] : 0.0;
        s[i] = cum[seg] + asg[i].t * seg_len;
    }
    return s;
}

std::size_t nearest_node(const std::vector<double>& cum, double s) {
    const auto it = std::lower_bound(cum.begin(), cum.end(), s);
    if (it == cum.begin()) return 0;
    if (it == cum.end()) return cum.size() - 1;
    const std::size_t hi = static_cast<std::size_t>(it - cum.begin());
    const std::size_t lo = hi - 1;
    return (s - cum[lo] <= cum[hi] - s) ? lo : hi;
}

} // namespace

std::vector<double> node_projected_masses(const Polyline& curve,
                                          const WeightedPointCloud& cloud) {
    const std::vector<double> cum = cumulative_arc_lengths(curve);
    const std::vector<double> s = foot_positions(curve, cloud, cum);
    std::vector<double> masses(curve.size(), 0.0);
    for (std::size_t i = 0; i < s.size(); ++i)
        masses[nearest_node(cum, s[i])] += cloud.weights()[i];
    return masses;
}

MassProjectionReport mass_projection(const Polyline& curve,
                                     const WeightedPointCloud& cloud,
                                     const EnergyParams& params,
                                     std::size_t first_node, std::size_t last_node,
                                     double q_norm_estimate, double q) {
    if (first_node >= last_node || last_node >= curve.size())
        throw std::invalid_argument("mass_projection: empty or invalid interval");
    if (q != 0 && !(q >= 1))
        throw std::invalid_argument("mass_projection: q must be >= 1 (0 = infinity)");

    const std::vector<double> cum = cumulative_arc_lengths(curve);
    const std::vector<double> s = foot_positions(curve, cloud, cum);

    MassProjectionReport rep;
    rep.first_node = first_node;
    rep.last_node = last_node;
    rep.q = q;
    rep.q_norm_estimate = q_norm_estimate;
    rep.arc_length = cum[last_node] - cum[first_node];

    rep.node_masses.assign(curve.size(), 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double w = cloud.weights()[i];
        rep.node_masses[nearest_node(cum, s[i])] += w;
        if (s[i] >= cum[first_node] && s[i] <= cum[last_node])
            rep.empirical_mass += w;
        rep.total_projected_mass += w;
    }

    const int d = static_cast<int>(cloud.dim());
    const double D = params.D;
    const double base = rep.arc_length * unit_ball_volume(d - 1) *
                        (std::pow(D, d) / d + std::pow(D, d + 1) / (d + 1) * params.Y);
    const double exponent = q == 0 ? 1.0 : 1.0 - 1.0 / q;
    rep.bound_rhs = q_norm_estimate * std::pow(base, exponent);
    rep.pass = rep.empirical_mass <= rep.bound_rhs;
    return rep;
}

std::vector<NodeMassSample> node_mass_refinement(const WeightedPointCloud& cloud,
                                                 const EnergyParams& params,
                                                 const std::vector<int>& node_counts,
                                                 const FitConfig& config) {
    std::vector<NodeMassSample> out;
    out.reserve(node_counts.size());
    for (const int count : node_counts) {
        FitConfig cfg = config;
        cfg.n_nodes = count;
        const FitReport rep = minimize(cloud, params, cfg);
        const std::vector<double> masses = node_projected_masses(rep.curve, cloud);
        NodeMassSample sample;
        sample.n_nodes = count;
        if (masses.size() >= 3) {
            for (std::size_t k = 1; k + 1 < masses.size(); ++k)
                sample.max_interior_node_mass =
                    std::max(sample.max_interior_node_mass, masses[k]);
        } else {
            for (const double m : masses)
                sample.max_interior_node_mass =
                    std::max(sample.max_interior_node_mass, m);
        }
        out.push_back(sample);
    }
    return out;
}

ElasticaResidualReport elastica_residual(const Polyline& curve,
                                         const WeightedPointCloud& cloud,
                                         const EnergyParams& params, double knot_tol) {
    if (curve.dim() != 2)
        throw std::invalid_argument("elastica_residual: curve must live in R^2");
    ElasticaResidualReport rep;
    rep.knot_tol = knot_tol;
    const std::size_t n = curve.size();
    rep.signed_curvature.assign(n, 0.0);
    if (n < 3) return rep;

    const std::vector<double> masses = node_projected_masses(curve, cloud);
    const double mass_cut = knot_tol * cloud.total_mass();
    std::vector<bool> is_knot(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        if (masses[k] > mass_cut) {
            is_knot[k] = true;
            rep.knots.push_back(k);
        }
    }
    // a projected atom loads both nodes of its segment, so the node next
    // to a knot is still forced; keep it out of the knot-free runs
    std::vector<bool> near_knot = is_knot;
    for (std::size_t k = 0; k < n; ++k) {
        if (!is_knot[k]) continue;
        if (k > 0) near_knot[k - 1] = true;
        if (k + 1 < n) near_knot[k + 1] = true;
    }
    is_knot.swap(near_knot);

    const std::vector<Vec> u = tangents(curve);
    const std::vector<double> cum = cumulative_arc_lengths(curve);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double c = std::clamp(u[k - 1].dot(u[k]), -1.0, 1.0);
        const double theta = std::acos(c);
        const double ell = 0.5 * ((cum[k] - cum[k - 1]) + (cum[k + 1] - cum[k]));
        const double cross = u[k - 1][0] * u[k][1] - u[k - 1][1] * u[k][0];
        rep.signed_curvature[k] = (cross >= 0 ? 1.0 : -1.0) * theta / ell;
    }

    auto usable = [&](std::size_t k) {
        return k >= 1 && k + 1 < n && !is_knot[k];
    };
    for (std::size_t k = 2; k + 2 < n; ++k) {
        if (!usable(k - 1) || !usable(k) || !usable(k + 1)) continue;
        const double h1 = cum[k] - cum[k - 1];
        const double h2 = cum[k + 1] - cum[k];
        const double ka = rep.signed_curvature[k - 1];
        const double kb = rep.signed_curvature[k];
        const double kc = rep.signed_curvature[k + 1];
        const double kpp = 2.0 * ((kc - kb) / h2 - (kb - ka) / h1) / (h1 + h2);
        const double residual = 2.0 * params.epsilon * kpp +
                                params.epsilon * kb * kb * kb -
                                params.lambda * kb;
        rep.residual_nodes.push_back(k);
        rep.residuals.push_back(residual);
        rep.max_residual = std::max(rep.max_residual, std::abs(residual));
    }
    return rep;
}

CircleSegmentResult circle_vs_segment(double r, double lambda, double epsilon,
                                      int n_samples) {
    if (!(r > 0))
        throw std::invalid_argument("circle_vs_segment: r must be > 0");
    if (!(2 * M_PI * lambda < 2 * M_PI + 1))
        throw std::invalid_argument("circle_vs_segment: need 2 pi lambda < 2 pi + 1");
    if (n_samples < 8)
        throw std::invalid_argument("circle_vs_segment: need at least 8 samples");

    std::vector<Vec> pts;
    pts.reserve(n_samples);
    for (int j = 0; j < n_samples; ++j) {
        const double phi = 2 * M_PI * (j + 0.5) / n_samples;
        Vec p(2);
        p << r * std::cos(phi), r * std::sin(phi);
        pts.push_back(std::move(p));
    }
    const double w = 2 * M_PI * r / n_samples; // discretizing H^1 on the circle
    WeightedPointCloud cloud(pts, std::vector<double>(n_samples, w));
    const EnergyParams params = EnergyParams::for_cloud(cloud, lambda, epsilon, 1.0);

    Polyline polygon;
    polygon.nodes = pts;
    polygon.nodes.push_back(pts.front());

    Polyline segment;
    Vec a(2), b(2);
    a << -r, 0.0;
    b << r, 0.0;
    segment.nodes = {a, b};

    CircleSegmentResult out;
    out.radius = r;
    out.lambda = lambda;
    out.epsilon = epsilon;
    out.n_samples = n_samples;
    out.circle_energy = total_energy(cloud, polygon, params).total;
    out.segment_energy = total_energy(cloud, segment, params).total;
    out.circle_energy_analytic = 2 * M_PI * lambda * r + 2 * M_PI * epsilon / r;
    out.segment_energy_analytic = 4 * r * r + 2 * lambda * r;
    return out;
}

double crossover_radius(double lambda, double epsilon) {
    const double denom = 1.0 + 2.0 * lambda - 2.0 * M_PI * lambda;
    if (!(denom > 0))
        throw std::invalid_argument(
            "crossover_radius: requires lambda < 1 / (2 pi - 2)");
    if (!(epsilon > 0))
        throw std::invalid_argument("crossover_radius: epsilon must be > 0");
    return std::sqrt(2.0 * M_PI * epsilon / denom);
}

} // namespace elavg
