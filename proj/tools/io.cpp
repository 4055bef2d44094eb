#include "io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace elavg::cli {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (std::string& s : out) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        s = (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    }
    return out;
}

double parse_number(const std::string& tok, int line_no) {
    double v = 0;
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        throw InputError("row " + std::to_string(line_no) + ": invalid number '" +
                         tok + "'");
    if (!std::isfinite(v))
        throw InputError("row " + std::to_string(line_no) + ": non-finite value");
    return v;
}

LoadedCloud read_csv(const std::filesystem::path& path,
                     const std::string& weight_col) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw InputError("no data points");
    const std::vector<std::string> header = split_csv_line(line);

    std::ptrdiff_t weight_idx = -1;
    std::vector<std::size_t> coord_idx;
    std::vector<std::string> coord_names;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!weight_col.empty() && header[i] == weight_col) {
            weight_idx = static_cast<std::ptrdiff_t>(i);
        } else {
            coord_idx.push_back(i);
            coord_names.push_back(header[i]);
        }
    }
    if (!weight_col.empty() && weight_idx < 0)
        throw InputError("weight column '" + weight_col + "' not found in header");
    if (coord_idx.size() < 2)
        throw InputError("need at least 2 coordinate columns");

    std::vector<Vec> points;
    std::vector<double> weights;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw InputError("row " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " columns, got " +
                             std::to_string(cells.size()));
        Vec p(static_cast<Eigen::Index>(coord_idx.size()));
        for (std::size_t c = 0; c < coord_idx.size(); ++c)
            p[static_cast<Eigen::Index>(c)] = parse_number(cells[coord_idx[c]], line_no);
        double w = 1.0;
        if (weight_idx >= 0) {
            w = parse_number(cells[static_cast<std::size_t>(weight_idx)], line_no);
            if (w < 0)
                throw InputError("row " + std::to_string(line_no) +
                                 ": negative weight " + cells[weight_idx]);
        }
        points.push_back(std::move(p));
        weights.push_back(w);
    }
    if (points.empty()) throw InputError("no data points");
    try {
        return LoadedCloud{WeightedPointCloud(std::move(points), std::move(weights)),
                           std::move(coord_names)};
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

LoadedCloud read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array())
        throw InputError("JSON input must be an object with a 'points' array");
    const auto& pts = doc["points"];
    if (pts.empty()) throw InputError("no data points");

    std::vector<Vec> points;
    points.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& row = pts[i];
        if (!row.is_array() || row.size() < 2)
            throw InputError("row " + std::to_string(i + 1) +
                             ": point must be an array of >= 2 numbers");
        Vec p(static_cast<Eigen::Index>(row.size()));
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!row[c].is_number())
                throw InputError("row " + std::to_string(i + 1) + ": invalid number");
            p[static_cast<Eigen::Index>(c)] = row[c].get<double>();
            if (!std::isfinite(p[static_cast<Eigen::Index>(c)]))
                throw InputError("row " + std::to_string(i + 1) + ": non-finite value");
        }
        points.push_back(std::move(p));
    }
    std::vector<double> weights(points.size(), 1.0);
    if (doc.contains("weights")) {
        const auto& ws = doc["weights"];
        if (!ws.is_array() || ws.size() != points.size())
            throw InputError("'weights' must match 'points' in length");
        for (std::size_t i = 0; i < ws.size(); ++i) {
            if (!ws[i].is_number())
                throw InputError("row " + std::to_string(i + 1) + ": invalid weight");
            weights[i] = ws[i].get<double>();
            if (weights[i] < 0)
                throw InputError("row " + std::to_string(i + 1) + ": negative weight " +
                                 ws[i].dump());
        }
    }
    std::vector<std::string> names;
    for (Eigen::Index c = 0; c < points.front().size(); ++c)
        names.push_back("x" + std::to_string(c));
    try {
        return LoadedCloud{WeightedPointCloud(std::move(points), std::move(weights)),
                           std::move(names)};
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

} // namespace

LoadedCloud read_cloud(const std::filesystem::path& path, std::string format,
                       const std::string& weight_col) {
    if (format.empty()) {
        const std::string ext = path.extension().string();
        format = (ext == ".json") ? "json" : "csv";
    }
    if (format == "csv") return read_csv(path, weight_col);
    if (format == "json") return read_json(path);
    throw InputError("unknown input format '" + format + "' (expected csv or json)");
}

std::string format_double(double v) {
    char buf[40];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_curve_csv(const std::filesystem::path& path, const Polyline& curve) {
    std::ostringstream out;
    const Eigen::Index d = curve.dim();
    for (Eigen::Index c = 0; c < d; ++c) out << (c ? "," : "") << "x" << c;
    out << "\n";
    for (const Vec& node : curve.nodes) {
        for (Eigen::Index c = 0; c < d; ++c)
            out << (c ? "," : "") << format_double(node[c]);
        out << "\n";
    }
    atomic_write(path, out.str());
}

Polyline read_polyline_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open curve file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty curve file");
    const std::size_t d = split_csv_line(line).size();
    Polyline out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != d)
            throw InputError("row " + std::to_string(line_no) + ": expected " +
                             std::to_string(d) + " columns, got " +
                             std::to_string(cells.size()));
        Vec p(static_cast<Eigen::Index>(d));
        for (std::size_t c = 0; c < d; ++c)
            p[static_cast<Eigen::Index>(c)] = parse_number(cells[c], line_no);
        out.nodes.push_back(std::move(p));
    }
    if (out.nodes.empty()) throw InputError("empty curve file");
    return out;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

} // namespace elavg::cli
