#pragma once

#include <elavg/geometry.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace elavg::cli {

/// Malformed input data or configuration; mapped to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LoadedCloud {
    WeightedPointCloud cloud;
    std::vector<std::string> coord_names;
};

/// format: "csv", "json" or "" (infer from the extension, default csv).
/// weight_col names the CSV weight column ("" = unit weights).
LoadedCloud read_cloud(const std::filesystem::path& path, std::string format,
                       const std::string& weight_col);

/// CSV with header x0..x{d-1}, one node per row, 17 significant digits.
void write_curve_csv(const std::filesystem::path& path, const Polyline& curve);

/// Reads a curve written by write_curve_csv (or any headered numeric CSV).
Polyline read_polyline_csv(const std::filesystem::path& path);

/// Locale-independent shortest-17-significant-digit rendering.
std::string format_double(double v);

/// Writes via a temp file in the same directory, then renames.
void atomic_write(const std::filesystem::path& path, const std::string& content);

} // namespace elavg::cli
