#include "elavg/optimizer.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace elavg {

namespace {

double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Box-Muller; avoids the implementation-defined std distributions.
double gaussian(std::mt19937_64& eng) {
    double u1 = uniform01(eng);
    while (u1 <= 0) u1 = uniform01(eng);
    const double u2 = uniform01(eng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double min_edge_length(const Polyline& curve) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < curve.nodes.size(); ++i)
        m = std::min(m, (curve.nodes[i + 1] - curve.nodes[i]).norm());
    return m;
}

double max_node_grad_norm(const std::vector<Vec>& g) {
    double m = 0;
    for (const Vec& v : g) m = std::max(m, v.norm());
    return m;
}

FitReport evaluate_only(const WeightedPointCloud& cloud, const EnergyParams& params,
                        const Polyline& curve) {
    FitReport rep;
    rep.curve = curve;
    rep.breakdown = total_energy(cloud, curve, params);
    rep.converged = true;
    rep.energy_trace.push_back(rep.breakdown.total);
    return rep;
}

} // namespace

void validate(const FitConfig& config) {
    if (config.n_nodes < 2)
        throw std::invalid_argument("FitConfig: n_nodes must be >= 2");
    if (config.max_iters < 0)
        throw std::invalid_argument("FitConfig: max_iters must be >= 0");
    if (!(config.beta > 0 && config.beta < 1))
        throw std::invalid_argument("FitConfig: beta must be in (0,1)");
    if (!(config.armijo_c > 0 && config.armijo_c < 1))
        throw std::invalid_argument("FitConfig: armijo_c must be in (0,1)");
    if (config.resample_every < 1)
        throw std::invalid_argument("FitConfig: resample_every must be >= 1");
    if (config.n_starts < 1)
        throw std::invalid_argument("FitConfig: n_starts must be >= 1");
    if (config.step0 < 0 || config.grad_tol < 0 || config.jitter < 0)
        throw std::invalid_argument("FitConfig: negative setting");
    if (config.max_line_search < 1)
        throw std::invalid_argument("FitConfig: max_line_search must be >= 1");
}

Polyline init_segment(const WeightedPointCloud& cloud, int n_nodes) {
    const Eigen::Index d = cloud.dim();
    const double mass = cloud.total_mass();
    Vec mean = Vec::Zero(d);
    for (std::size_t i = 0; i < cloud.size(); ++i)
        mean += cloud.weights()[i] * cloud.points()[i];
    mean /= mass;

    if (cloud.diameter() == 0)
        return Polyline{{mean}};

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec c = cloud.points()[i] - mean;
        cov += cloud.weights()[i] * (c * c.transpose());
    }
    cov /= mass;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    Vec dir = eig.eigenvectors().col(d - 1);
    Eigen::Index imax = 0;
    dir.cwiseAbs().maxCoeff(&imax);
    if (dir[imax] < 0) dir = -dir;
    const double sigma = std::sqrt(std::max(0.0, eig.eigenvalues()[d - 1]));
    if (sigma == 0)
        return Polyline{{mean}};

    Polyline out;
    out.nodes.reserve(n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
        const double a = -1.0 + 2.0 * j / (n_nodes - 1);
        out.nodes.push_back(mean + (a * sigma) * dir);
    }
    return out;
}

SingletonBest best_singleton(const WeightedPointCloud& cloud,
                             const EnergyParams& params) {
    SingletonBest best;
    best.energy = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cloud.size(); ++j) {
        const Polyline single{{cloud.points()[j]}};
        const double e = total_energy(cloud, single, params).total;
        if (e < best.energy) {
            best.energy = e;
            best.point_index = j;
        }
    }
    return best;
}

double max_abs_discrete_curvature(const Polyline& curve) {
    if (curve.size() < 3) return 0;
    const std::vector<double> angles = turning_angles(curve);
    double m = 0;
    double prev_len = (curve.nodes[1] - curve.nodes[0]).norm();
    for (std::size_t k = 1; k + 1 < curve.nodes.size(); ++k) {
        const double next_len = (curve.nodes[k + 1] - curve.nodes[k]).norm();
        const double ell = 0.5 * (prev_len + next_len);
        m = std::max(m, angles[k - 1] / ell);
        prev_len = next_len;
    }
    return m;
}

FitReport minimize_from(const WeightedPointCloud& cloud, const EnergyParams& params,
                        const FitConfig& config, const Polyline& initial) {
    validate(config);
    const double diam = cloud.diameter();
    const double step0 = config.step0 > 0 ? config.step0 : 0.1 * diam;
    const double step_cap = 64 * step0;
    const double grad_tol =
        config.grad_tol > 0 ? config.grad_tol : 1e-8 * diam * cloud.total_mass();
    const double contact_tol = 1e-9 * diam;

    Polyline curve = initial;
    if (curve.size() >= 2 && static_cast<int>(curve.size()) != config.n_nodes &&
        length(curve) > 0)
        curve = resample(curve, config.n_nodes);
    if (curve.size() < 2)
        return evaluate_only(cloud, params, curve);

    FitReport rep;
    double energy = total_energy(cloud, curve, params).total;
    rep.energy_trace.push_back(energy);
    double step = step0;

    // Barzilai-Borwein memory; reset whenever the node set changes.
    std::vector<Vec> prev_nodes;
    std::vector<Vec> prev_dir;
    bool bb_valid = false;

    std::vector<double> contact_budget;
    for (int iter = 1; iter <= config.max_iters; ++iter) {
        rep.iterations = iter;

        const double len = length(curve);
        const bool degenerate =
            min_edge_length(curve) < std::max(1e-12, 1e-9 * len);
        bool wants_resample = degenerate;
        if (!wants_resample && iter % config.resample_every == 0) {
            // redistribute only once the spacing has actually drifted;
            // re-interpolating an already uniform curve just perturbs the
            // nodes and stalls the final approach
            const double uniform = len / (curve.size() - 1);
            double drift = curve.size() == static_cast<std::size_t>(config.n_nodes)
                               ? 0.0
                               : 1.0;
            for (std::size_t i = 0; i + 1 < curve.nodes.size(); ++i) {
                const double edge = (curve.nodes[i + 1] - curve.nodes[i]).norm();
                drift = std::max(drift, std::abs(edge - uniform) / uniform);
            }
            wants_resample = drift > 0.2;
        }
        if (wants_resample) {
            if (len > 0) {
                Polyline fresh =
                    merge_close_nodes(resample(curve, config.n_nodes), 1e-9 * len);
                const double e_after = total_energy(cloud, fresh, params).total;
                rep.resample_events.push_back(
                    {iter, energy, e_after, rep.energy_trace.size() - 1});
                curve = std::move(fresh);
                energy = e_after;
                bb_valid = false;
            }
            if (curve.size() < 2) break;
        }

        const std::vector<ProjectionAssignment> asg = project_cloud(cloud, curve);
        std::vector<Vec> g = gradient(cloud, curve, params, asg);

        // For p = 1 the distance term is a cone around each touched point:
        // leaving a contact costs weight * |move|. Shrink the smooth
        // gradient at contact nodes by that budget (the minimal-norm
        // element of the generalized gradient), otherwise -g need not be
        // a descent direction and the iteration deadlocks at contacts.
        if (params.p == 1.0) {
            contact_budget.assign(curve.size(), 0.0);
            bool any = false;
            for (std::size_t i = 0; i < cloud.size(); ++i) {
                if (asg[i].distance > contact_tol) continue;
                const double w = cloud.weights()[i];
                contact_budget[asg[i].segment] += (1.0 - asg[i].t) * w;
                contact_budget[asg[i].segment + 1] += asg[i].t * w;
                any = true;
            }
            if (any) {
                for (std::size_t j = 0; j < curve.size(); ++j) {
                    if (contact_budget[j] <= 0) continue;
                    const double n = g[j].norm();
                    if (n <= contact_budget[j])
                        g[j].setZero();
                    else
                        g[j] *= 1.0 - contact_budget[j] / n;
                }
            }
        }

        rep.max_grad_norm = max_node_grad_norm(g);
        if (rep.max_grad_norm < grad_tol) {
            rep.converged = true;
            break;
        }
        double g_sq = 0;
        for (const Vec& v : g) g_sq += v.squaredNorm();

        // Barzilai-Borwein trial step <dx,dg>/<dg,dg>, clamped and backed
        // by the Armijo test below; plain gradient steps zigzag on the
        // badly conditioned curvature term
        double s = std::min(step_cap, 2 * step);
        if (bb_valid && prev_nodes.size() == curve.size()) {
            double sy = 0, yy = 0;
            for (std::size_t j = 0; j < curve.size(); ++j) {
                const Vec dx = curve.nodes[j] - prev_nodes[j];
                const Vec dg = g[j] - prev_dir[j];
                sy += dx.dot(dg);
                yy += dg.dot(dg);
            }
            if (sy > 0 && yy > 0)
                s = std::clamp(sy / yy, 1e-12 * step0, step_cap);
        }
        prev_nodes = curve.nodes;
        prev_dir = g;
        bb_valid = true;

        bool accepted = false;
        double e_new = energy;
        Polyline candidate = curve;
        for (int ls = 0; ls < config.max_line_search; ++ls) {
            for (std::size_t j = 0; j < curve.size(); ++j)
                candidate.nodes[j] = curve.nodes[j] - s * g[j];
            e_new = total_energy(cloud, candidate, params).total;
            if (e_new <= energy - config.armijo_c * s * g_sq) {
                accepted = true;
                break;
            }
            s *= config.beta;
        }
        if (!accepted) break; // stalled (e.g. nonsmooth p = 1 point)
        curve.nodes.swap(candidate.nodes);
        energy = e_new;
        rep.energy_trace.push_back(energy);
        step = s;
    }

    rep.curve = std::move(curve);
    rep.breakdown = total_energy(cloud, rep.curve, params);
    return rep;
}

FitReport minimize(const WeightedPointCloud& cloud, const EnergyParams& params,
                   const FitConfig& config) {
    validate(config);
    std::optional<FitReport> best;
    for (int start = 0; start < config.n_starts; ++start) {
        Polyline init = init_segment(cloud, config.n_nodes);
        if (start > 0 && init.size() >= 2) {
            std::mt19937_64 eng(config.seed + 0x9e3779b97f4a7c15ULL *
                                                  static_cast<std::uint64_t>(start));
            const double sigma = config.jitter * cloud.diameter();
            for (Vec& node : init.nodes)
                for (Eigen::Index c = 0; c < node.size(); ++c)
                    node[c] += sigma * gaussian(eng);
        }

        // Continuation bootstrap: descend first with a nearly slack
        // curvature penalty on a coarse curve, then at the target penalty
        // on an intermediate one. The descent step is capped by the
        // stiffest curvature mode (~ l^3 / epsilon), so large shape
        // changes are only affordable when the curve is coarse or floppy.
        // Only the final stage is reported.
        if (init.size() >= 2) {
            struct Rung {
                int nodes;
                double eps_factor;
            };
            for (const Rung rung : {Rung{12, 1e-3}, Rung{48, 1.0}}) {
                if (rung.nodes >= config.n_nodes) break;
                FitConfig stage_cfg = config;
                stage_cfg.n_nodes = rung.nodes;
                const EnergyParams stage_params = EnergyParams::for_cloud(
                    cloud, params.lambda, params.epsilon * rung.eps_factor,
                    params.p);
                const FitReport stage =
                    minimize_from(cloud, stage_params, stage_cfg, init);
                if (stage.curve.size() < 2) break;
                init = stage.curve;
            }
        }

        FitReport rep = minimize_from(cloud, params, config, init);
        if (!best || rep.breakdown.total < best->breakdown.total)
            best = std::move(rep);
    }

    // a singleton at a data point is always an admissible competitor
    const SingletonBest single = best_singleton(cloud, params);
    if (single.energy < best->breakdown.total) {
        FitReport rep =
            evaluate_only(cloud, params, Polyline{{cloud.points()[single.point_index]}});
        rep.iterations = best->iterations;
        return rep;
    }
    return *best;
}

std::vector<SweepEntry> epsilon_sweep(const WeightedPointCloud& cloud, double lambda,
                                      double p, const std::vector<double>& epsilons,
                                      const FitConfig& config) {
    if (epsilons.empty())
        throw std::invalid_argument("epsilon_sweep: empty epsilon list");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0))
            throw std::invalid_argument("epsilon_sweep: epsilons must be positive");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("epsilon_sweep: epsilons must be descending");
    }
    std::vector<SweepEntry> out;
    out.reserve(epsilons.size());
    std::optional<Polyline> warm;
    for (const double eps : epsilons) {
        const EnergyParams params = EnergyParams::for_cloud(cloud, lambda, eps, p);
        FitReport rep;
        if (warm && warm->size() >= 2)
            rep = minimize_from(cloud, params, config, *warm);
        else
            rep = minimize(cloud, params, config);
        SweepEntry entry;
        entry.epsilon = eps;
        entry.max_abs_curvature = max_abs_discrete_curvature(rep.curve);
        entry.energy_no_curvature =
            rep.breakdown.distance_term + rep.breakdown.length_term;
        warm = rep.curve;
        entry.report = std::move(rep);
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace elavg
