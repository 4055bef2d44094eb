#pragma once

#include <elavg/geometry.hpp>

#include <filesystem>
#include <vector>

namespace elavg::cli {

/// Scatter plot of the data with the fitted curve. Inputs with d > 2 are
/// projected onto the top two weighted principal components (noted in the
/// figure title).
void write_fit_svg(const std::filesystem::path& path, const WeightedPointCloud& cloud,
                   const Polyline& curve);

/// log-log plot of max |kappa| against epsilon.
void write_sweep_svg(const std::filesystem::path& path,
                     const std::vector<double>& epsilons,
                     const std::vector<double>& max_kappa);

} // namespace elavg::cli
