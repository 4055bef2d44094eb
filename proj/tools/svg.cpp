#include "svg.hpp"

#include "io.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace elavg::cli {

namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 600;
constexpr double kMargin = 40;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

struct Mapper {
    double x0, y0, scale;
    double px(double x) const { return kMargin + (x - x0) * scale; }
    double py(double y) const { return kHeight - kMargin - (y - y0) * scale; }
};

Mapper fit_mapper(double min_x, double max_x, double min_y, double max_y) {
    const double span_x = std::max(max_x - min_x, 1e-12);
    const double span_y = std::max(max_y - min_y, 1e-12);
    const double scale = std::min((kWidth - 2 * kMargin) / span_x,
                                  (kHeight - 2 * kMargin) / span_y);
    return Mapper{min_x, min_y, scale};
}

} // namespace

void write_fit_svg(const std::filesystem::path& path, const WeightedPointCloud& cloud,
                   const Polyline& curve) {
    const Eigen::Index d = cloud.dim();
    std::string title = "elastic-avgdist fit";

    // 2D coordinates to draw; higher dimensions get projected
    std::vector<Eigen::Vector2d> pts(cloud.size());
    std::vector<Eigen::Vector2d> nodes(curve.size());
    if (d == 2) {
        for (std::size_t i = 0; i < cloud.size(); ++i)
            pts[i] = cloud.points()[i].head<2>();
        for (std::size_t i = 0; i < curve.size(); ++i)
            nodes[i] = curve.nodes[i].head<2>();
    } else {
        title += " (projected onto top two principal components)";
        Vec mean = Vec::Zero(d);
        for (std::size_t i = 0; i < cloud.size(); ++i)
            mean += cloud.weights()[i] * cloud.points()[i];
        mean /= cloud.total_mass();
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const Vec c = cloud.points()[i] - mean;
            cov += cloud.weights()[i] * (c * c.transpose());
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
        Eigen::MatrixXd basis(d, 2);
        basis.col(0) = eig.eigenvectors().col(d - 1);
        basis.col(1) = eig.eigenvectors().col(d - 2);
        for (std::size_t i = 0; i < cloud.size(); ++i)
            pts[i] = (basis.transpose() * (cloud.points()[i] - mean)).head<2>();
        for (std::size_t i = 0; i < curve.size(); ++i)
            nodes[i] = (basis.transpose() * (curve.nodes[i] - mean)).head<2>();
    }

    double min_x = pts[0][0], max_x = pts[0][0], min_y = pts[0][1], max_y = pts[0][1];
    for (const auto& p : pts) {
        min_x = std::min(min_x, p[0]);
        max_x = std::max(max_x, p[0]);
        min_y = std::min(min_y, p[1]);
        max_y = std::max(max_y, p[1]);
    }
    for (const auto& p : nodes) {
        min_x = std::min(min_x, p[0]);
        max_x = std::max(max_x, p[0]);
        min_y = std::min(min_y, p[1]);
        max_y = std::max(max_y, p[1]);
    }
    const Mapper m = fit_mapper(min_x, max_x, min_y, max_y);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
        << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<title>" << title << "</title>\n";
    svg << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" "
           "font-size=\"14\">"
        << title << "</text>\n";
    for (const auto& p : pts)
        svg << "<circle cx=\"" << num(m.px(p[0])) << "\" cy=\"" << num(m.py(p[1]))
            << "\" r=\"2\" fill=\"#4477aa\" fill-opacity=\"0.6\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"#cc3311\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < nodes.size(); ++i)
        svg << (i ? " " : "") << num(m.px(nodes[i][0])) << "," << num(m.py(nodes[i][1]));
    svg << "\"/>\n</svg>\n";
    atomic_write(path, svg.str());
}

void write_sweep_svg(const std::filesystem::path& path,
                     const std::vector<double>& epsilons,
                     const std::vector<double>& max_kappa) {
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
        << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" "
           "font-size=\"14\">max |kappa| vs epsilon (log-log)</text>\n";

    std::vector<std::pair<double, double>> logs;
    for (std::size_t i = 0; i < epsilons.size(); ++i)
        if (epsilons[i] > 0 && i < max_kappa.size() && max_kappa[i] > 0)
            logs.emplace_back(std::log10(epsilons[i]), std::log10(max_kappa[i]));
    if (logs.size() >= 2) {
        double min_x = logs[0].first, max_x = logs[0].first;
        double min_y = logs[0].second, max_y = logs[0].second;
        for (const auto& [x, y] : logs) {
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);
        }
        const Mapper m = fit_mapper(min_x, max_x, min_y, max_y);
        svg << "<polyline fill=\"none\" stroke=\"#cc3311\" stroke-width=\"2\" "
               "points=\"";
        for (std::size_t i = 0; i < logs.size(); ++i)
            svg << (i ? " " : "") << num(m.px(logs[i].first)) << ","
                << num(m.py(logs[i].second));
        svg << "\"/>\n";
        for (const auto& [x, y] : logs)
            svg << "<circle cx=\"" << num(m.px(x)) << "\" cy=\"" << num(m.py(y))
                << "\" r=\"4\" fill=\"#4477aa\"/>\n";
        svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 8
            << "\" font-family=\"sans-serif\" font-size=\"12\" "
               "text-anchor=\"middle\">log10 epsilon</text>\n";
    } else {
        svg << "<text x=\"" << kMargin
            << "\" y=\"48\" font-family=\"sans-serif\" font-size=\"12\">not enough "
               "points for a log-log plot</text>\n";
    }
    svg << "</svg>\n";
    atomic_write(path, svg.str());
}

} // namespace elavg::cli
