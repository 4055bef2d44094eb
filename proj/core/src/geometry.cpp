#include "elavg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace elavg {

namespace {

void check_finite(const Vec& v, const char* what) {
    if (!v.allFinite())
        throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
}

} // namespace

WeightedPointCloud::WeightedPointCloud(std::vector<Vec> points,
                                       std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.empty())
        throw std::invalid_argument("WeightedPointCloud: no points");
    if (points_.size() != weights_.size())
        throw std::invalid_argument("WeightedPointCloud: points/weights size mismatch");
    dim_ = points_.front().size();
    if (dim_ < 2)
        throw std::invalid_argument("WeightedPointCloud: dimension must be >= 2");
    for (const Vec& p : points_) {
        if (p.size() != dim_)
            throw std::invalid_argument("WeightedPointCloud: mixed point dimensions");
        check_finite(p, "WeightedPointCloud");
    }
    bool any_positive = false;
    total_mass_ = 0;
    for (double w : weights_) {
        if (!(w >= 0))
            throw std::invalid_argument("WeightedPointCloud: negative weight");
        total_mass_ += w;
        any_positive = any_positive || w > 0;
    }
    if (!any_positive || !(total_mass_ > 0))
        throw std::invalid_argument("WeightedPointCloud: total mass must be positive");

    diameter_ = 0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (weights_[i] <= 0) continue;
        for (std::size_t j = i + 1; j < points_.size(); ++j) {
            if (weights_[j] <= 0) continue;
            diameter_ = std::max(diameter_, (points_[i] - points_[j]).norm());
        }
    }
}

WeightedPointCloud WeightedPointCloud::with_unit_weights(std::vector<Vec> points) {
    std::vector<double> w(points.size(), 1.0);
    return WeightedPointCloud(std::move(points), std::move(w));
}

void validate(const Polyline& curve) {
    if (curve.nodes.empty())
        throw std::invalid_argument("Polyline: no nodes");
    const Eigen::Index d = curve.nodes.front().size();
    if (d < 2)
        throw std::invalid_argument("Polyline: dimension must be >= 2");
    for (const Vec& p : curve.nodes) {
        if (p.size() != d)
            throw std::invalid_argument("Polyline: mixed node dimensions");
        check_finite(p, "Polyline");
    }
    for (std::size_t i = 0; i + 1 < curve.nodes.size(); ++i)
        if ((curve.nodes[i + 1] - curve.nodes[i]).norm() == 0)
            throw std::invalid_argument("Polyline: zero-length edge at node " +
                                        std::to_string(i));
}

EnergyParams EnergyParams::for_cloud(const WeightedPointCloud& cloud,
                                     double lambda, double epsilon, double p) {
    if (!(lambda > 0)) throw std::invalid_argument("EnergyParams: lambda must be > 0");
    if (!(epsilon > 0)) throw std::invalid_argument("EnergyParams: epsilon must be > 0");
    if (!(p >= 1)) throw std::invalid_argument("EnergyParams: p must be >= 1");
    EnergyParams out;
    out.lambda = lambda;
    out.epsilon = epsilon;
    out.p = p;
    out.diam = cloud.diameter();
    out.D = 2 * out.diam;
    out.theta = p * std::pow(out.D, p - 1);
    out.Y = std::sqrt(2 * (2 * out.theta + lambda) / epsilon);
    return out;
}

double length(const Polyline& curve) {
    double total = 0;
    for (std::size_t i = 0; i + 1 < curve.nodes.size(); ++i)
        total += (curve.nodes[i + 1] - curve.nodes[i]).norm();
    return total;
}

std::vector<double> cumulative_arc_lengths(const Polyline& curve) {
    std::vector<double> cum(curve.size(), 0.0);
    for (std::size_t i = 0; i + 1 < curve.nodes.size(); ++i)
        cum[i + 1] = cum[i] + (curve.nodes[i + 1] - curve.nodes[i]).norm();
    return cum;
}

Vec point_at_arc_length(const Polyline& curve, const std::vector<double>& cum,
                        double s) {
    if (curve.nodes.empty())
        throw std::invalid_argument("point_at_arc_length: empty curve");
    if (curve.size() == 1 || s <= 0) return curve.nodes.front();
    const double total = cum.back();
    if (s >= total) return curve.nodes.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - cum.begin()) - 1;
    const double seg_len = cum[i + 1] - cum[i];
    if (seg_len <= 0) return curve.nodes[i];
    const double t = (s - cum[i]) / seg_len;
    return curve.nodes[i] + t * (curve.nodes[i + 1] - curve.nodes[i]);
}

std::vector<Vec> tangents(const Polyline& curve) {
    if (curve.size() < 2)
        throw std::invalid_argument("tangents: need at least 2 nodes");
    std::vector<Vec> out;
    out.reserve(curve.size() - 1);
    for (std::size_t i = 0; i + 1 < curve.nodes.size(); ++i) {
        Vec e = curve.nodes[i + 1] - curve.nodes[i];
        const double len = e.norm();
        if (len == 0)
            throw std::invalid_argument("tangents: zero-length edge at node " +
                                        std::to_string(i));
        out.push_back(e / len);
    }
    return out;
}

std::vector<double> turning_angles(const Polyline& curve) {
    if (curve.size() < 3)
        throw std::invalid_argument("turning_angles: need at least 3 nodes");
    const std::vector<Vec> u = tangents(curve);
    std::vector<double> out;
    out.reserve(u.size() - 1);
    for (std::size_t k = 0; k + 1 < u.size(); ++k) {
        const double c = std::clamp(u[k].dot(u[k + 1]), -1.0, 1.0);
        out.push_back(std::acos(c));
    }
    return out;
}

double discrete_curvature_term(const Polyline& curve) {
    if (curve.size() <= 2) return 0;
    const std::vector<Vec> u = tangents(curve);
    double total = 0;
    double prev_len = (curve.nodes[1] - curve.nodes[0]).norm();
    for (std::size_t k = 1; k + 1 < curve.nodes.size(); ++k) {
        const double next_len = (curve.nodes[k + 1] - curve.nodes[k]).norm();
        const double c = std::clamp(u[k - 1].dot(u[k]), -1.0, 1.0);
        const double theta = std::acos(c);
        const double ell = 0.5 * (prev_len + next_len);
        total += theta * theta / ell;
        prev_len = next_len;
    }
    return total;
}

ProjectionAssignment project_point(const Vec& y, const Polyline& curve) {
    if (curve.nodes.empty())
        throw std::invalid_argument("project_point: empty curve");
    ProjectionAssignment best;
    if (curve.size() == 1) {
        best.segment = 0;
        best.t = 0;
        best.foot = curve.nodes.front();
        best.distance = (y - best.foot).norm();
        return best;
    }
    double best_sq = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < curve.nodes.size(); ++i) {
        const Vec& a = curve.nodes[i];
        Vec e = curve.nodes[i + 1] - a;
        const double sq_len = e.squaredNorm();
        double t = 0;
        if (sq_len > 0) t = std::clamp((y - a).dot(e) / sq_len, 0.0, 1.0);
        Vec foot = a + t * e;
        const double d_sq = (y - foot).squaredNorm();
        if (d_sq < best_sq) {
            best_sq = d_sq;
            best.segment = static_cast<Eigen::Index>(i);
            best.t = t;
            best.foot = std::move(foot);
        }
    }
    best.distance = std::sqrt(best_sq);
    return best;
}

int thread_budget() {
    int budget = 0;
    if (const char* env = std::getenv("ELASTIC_AVGDIST_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 0 && v < 1024) budget = static_cast<int>(v);
    }
    if (budget == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        budget = hw > 0 ? static_cast<int>(hw) : 1;
    }
    return std::max(1, budget);
}

std::vector<ProjectionAssignment> project_cloud(const WeightedPointCloud& cloud,
                                                const Polyline& curve) {
    const std::size_t n = cloud.size();
    std::vector<ProjectionAssignment> out(n);
    const std::size_t segments = curve.size() > 1 ? curve.size() - 1 : 1;
    const int budget = thread_budget();
    const bool parallel = budget > 1 && n >= 2048 && n * segments >= (1u << 20);
    if (!parallel) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = project_point(cloud.points()[i], curve);
        return out;
    }
    const int workers = std::min<int>(budget, static_cast<int>(n / 1024) + 1);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i)
                out[i] = project_point(cloud.points()[i], curve);
        });
    }
    for (std::thread& t : pool) t.join();
    return out;
}

Polyline resample(const Polyline& curve, int n_nodes) {
    if (n_nodes < 2)
        throw std::invalid_argument("resample: n_nodes must be >= 2");
    const std::vector<double> cum = cumulative_arc_lengths(curve);
    const double total = cum.empty() ? 0 : cum.back();
    if (!(total > 0))
        throw std::invalid_argument("resample: zero-length curve");
    const double snap = 1e-12 * total;

    Polyline out;
    out.nodes.reserve(n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
        Vec node;
        if (j == 0) {
            node = curve.nodes.front();
        } else if (j == n_nodes - 1) {
            node = curve.nodes.back();
        } else {
            const double s = total * j / (n_nodes - 1);
            auto it = std::upper_bound(cum.begin(), cum.end(), s);
            std::size_t i = static_cast<std::size_t>(it - cum.begin());
            i = (i == 0) ? 0 : i - 1;
            if (std::abs(s - cum[i]) <= snap) {
                node = curve.nodes[i];
            } else if (i + 1 < cum.size() && std::abs(s - cum[i + 1]) <= snap) {
                node = curve.nodes[i + 1];
            } else {
                const double seg_len = cum[i + 1] - cum[i];
                const double t = (s - cum[i]) / seg_len;
                node = curve.nodes[i] + t * (curve.nodes[i + 1] - curve.nodes[i]);
            }
        }
        if (!out.nodes.empty() && (node - out.nodes.back()).norm() == 0)
            continue; // exact duplicate, e.g. a curve that retraces itself
        out.nodes.push_back(std::move(node));
    }
    return out;
}

Polyline reversed(const Polyline& curve) {
    Polyline out = curve;
    std::reverse(out.nodes.begin(), out.nodes.end());
    return out;
}

double curve_metric(const Polyline& a, const Polyline& b, int n_samples) {
    if (a.nodes.empty() || b.nodes.empty())
        throw std::invalid_argument("curve_metric: empty curve");
    if (n_samples < 2) n_samples = 2;
    const std::vector<double> cum_a = cumulative_arc_lengths(a);
    const std::vector<double> cum_b = cumulative_arc_lengths(b);
    const double la = cum_a.back();
    const double lb = cum_b.back();
    double sup_fwd = 0;
    double sup_rev = 0;
    for (int k = 0; k < n_samples; ++k) {
        const double t = static_cast<double>(k) / (n_samples - 1);
        const Vec pa = point_at_arc_length(a, cum_a, t * la);
        sup_fwd = std::max(sup_fwd, (pa - point_at_arc_length(b, cum_b, t * lb)).norm());
        sup_rev = std::max(sup_rev,
                           (pa - point_at_arc_length(b, cum_b, (1 - t) * lb)).norm());
    }
    return std::min(sup_fwd, sup_rev) + std::abs(la - lb);
}

ConfinementResult confinement_check(const Polyline& curve,
                                    const WeightedPointCloud& cloud,
                                    const EnergyParams& params) {
    const double radius =
        params.diam + std::pow(params.diam, params.p) / params.lambda;
    ConfinementResult res;
    for (const Vec& node : curve.nodes) {
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            if (cloud.weights()[i] <= 0) continue;
            dist = std::min(dist, (node - cloud.points()[i]).norm());
        }
        res.max_violation = std::max(res.max_violation, std::max(0.0, dist - radius));
    }
    res.ok = res.max_violation == 0;
    return res;
}

Polyline merge_close_nodes(const Polyline& curve, double tol) {
    if (curve.size() <= 1) return curve;
    Polyline out;
    out.nodes.push_back(curve.nodes.front());
    for (std::size_t i = 1; i < curve.nodes.size(); ++i)
        if ((curve.nodes[i] - out.nodes.back()).norm() > tol)
            out.nodes.push_back(curve.nodes[i]);
    // keep the final endpoint in place of the last survivor
    if ((curve.nodes.back() - out.nodes.back()).norm() > 0) {
        if (out.size() >= 2)
            out.nodes.back() = curve.nodes.back();
        else if ((curve.nodes.back() - out.nodes.back()).norm() > tol)
            out.nodes.push_back(curve.nodes.back());
    }
    return out;
}

} // namespace elavg
