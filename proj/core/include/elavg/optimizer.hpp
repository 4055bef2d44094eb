#pragma once

#include "elavg/energy.hpp"

#include <cstdint>
#include <optional>

namespace elavg {

/// Gradient-descent settings. step0 and grad_tol equal to 0 select the
/// defaults 0.1 * diam and 1e-8 * diam * total_mass.
struct FitConfig {
    int n_nodes = 64;
    int max_iters = 5000;
    double step0 = 0;
    double beta = 0.5;       // backtracking factor
    double armijo_c = 1e-4;  // sufficient-decrease constant
    int resample_every = 25;
    double grad_tol = 0;
    std::uint64_t seed = 0;
    int n_starts = 1;
    double jitter = 0.05;    // multi-start jitter, relative to diam
    int max_line_search = 60;
};

/// Throws std::invalid_argument on out-of-range settings.
void validate(const FitConfig& config);

struct ResampleEvent {
    int iteration = 0;
    double energy_before = 0;
    double energy_after = 0;
    /// Index into FitReport::energy_trace of the last entry logged before
    /// this resample; the following entry may sit above it.
    std::size_t trace_index = 0;
};

struct FitReport {
    Polyline curve;
    EnergyBreakdown breakdown;
    int iterations = 0;
    bool converged = false;
    double max_grad_norm = 0;
    /// Energy after the initial evaluation and after each accepted step;
    /// non-increasing by the line-search contract.
    std::vector<double> energy_trace;
    std::vector<ResampleEvent> resample_events;
};

/// Segment through the weighted mean along the top weighted principal
/// direction, half-length one weighted standard deviation, discretized to
/// n_nodes. A zero-variance cloud gives a singleton at the mean.
Polyline init_segment(const WeightedPointCloud& cloud, int n_nodes);

/// Gradient descent with backtracking line search on the total energy,
/// resampling to n_nodes uniform arc-length nodes every resample_every
/// iterations. Deterministic given (inputs, seed). With n_starts > 1,
/// jittered initializations are run and the lowest-energy result wins.
/// The result never exceeds the best singleton energy (a singleton at the
/// best data point is returned if it beats the descent result).
FitReport minimize(const WeightedPointCloud& cloud, const EnergyParams& params,
                   const FitConfig& config);

/// Same as minimize but descending from the given curve (resampled to
/// n_nodes first); used for warm starts.
FitReport minimize_from(const WeightedPointCloud& cloud, const EnergyParams& params,
                        const FitConfig& config, const Polyline& initial);

struct SweepEntry {
    double epsilon = 0;
    FitReport report;
    double max_abs_curvature = 0;   // max_k theta_k / l_k
    double energy_no_curvature = 0; // distance + length terms
};

/// Fits for each epsilon in descending order, warm-starting each fit from
/// the previous one.
std::vector<SweepEntry> epsilon_sweep(const WeightedPointCloud& cloud, double lambda,
                                      double p, const std::vector<double>& epsilons,
                                      const FitConfig& config);

/// max_k theta_k / l_k over interior nodes; 0 for fewer than 3 nodes.
double max_abs_discrete_curvature(const Polyline& curve);

/// Data point whose singleton curve has the least energy, and that energy.
struct SingletonBest {
    std::size_t point_index = 0;
    double energy = 0;
};
SingletonBest best_singleton(const WeightedPointCloud& cloud,
                             const EnergyParams& params);

} // namespace elavg
