#include "mwca/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mwca::plot {

namespace {

constexpr double kCanvas = 720.0;
constexpr double kHalf = kCanvas / 2.0;
constexpr double kPlotHalf = 300.0;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                         "#9467bd", "#8c564b", "#e377c2"};
constexpr std::size_t kNumColors = sizeof(kColors) / sizeof(kColors[0]);

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Glyphs cycle with the cloud index so overlaid modes stay tellable apart.
void emit_glyph(std::ostringstream& svg, std::size_t kind, double x, double y,
                const char* color) {
    switch (kind % 5) {
        case 0:
            svg << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y)
                << "\" r=\"4\" fill=\"" << color << "\"/>";
            break;
        case 1:
            svg << "<rect x=\"" << fmt(x - 3.5) << "\" y=\"" << fmt(y - 3.5)
                << "\" width=\"7\" height=\"7\" fill=\"" << color << "\"/>";
            break;
        case 2:
            svg << "<path d=\"M " << fmt(x) << ' ' << fmt(y - 4.5) << " L "
                << fmt(x - 4) << ' ' << fmt(y + 3.5) << " L " << fmt(x + 4)
                << ' ' << fmt(y + 3.5) << " Z\" fill=\"" << color << "\"/>";
            break;
        case 3:
            svg << "<path d=\"M " << fmt(x) << ' ' << fmt(y - 5) << " L "
                << fmt(x + 4) << ' ' << fmt(y) << " L " << fmt(x) << ' '
                << fmt(y + 5) << " L " << fmt(x - 4) << ' ' << fmt(y)
                << " Z\" fill=\"" << color << "\"/>";
            break;
        default:
            svg << "<path d=\"M " << fmt(x - 4) << ' ' << fmt(y) << " H "
                << fmt(x + 4) << " M " << fmt(x) << ' ' << fmt(y - 4) << " V "
                << fmt(y + 4) << "\" stroke=\"" << color
                << "\" stroke-width=\"2\"/>";
    }
}

}  // namespace

std::string render_biplot(const std::vector<Cloud>& clouds,
                          const std::string& x_label,
                          const std::string& y_label) {
    double extent = 0.0;
    for (const auto& cloud : clouds)
        for (const auto& p : cloud.points)
            extent = std::max({extent, std::abs(p[0]), std::abs(p[1])});
    if (!(extent > 0.0)) extent = 1.0;
    extent *= 1.05;

    const auto px = [&](double v) { return kHalf + v / extent * kPlotHalf; };
    const auto py = [&](double v) { return kHalf - v / extent * kPlotHalf; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas
        << "\" height=\"" << kCanvas << "\" viewBox=\"0 0 " << kCanvas << ' '
        << kCanvas << "\">\n";
    svg << "<rect width=\"" << kCanvas << "\" height=\"" << kCanvas
        << "\" fill=\"white\"/>\n";

    // axes through the origin
    svg << "<line x1=\"" << fmt(kHalf - kPlotHalf) << "\" y1=\"" << fmt(kHalf)
        << "\" x2=\"" << fmt(kHalf + kPlotHalf) << "\" y2=\"" << fmt(kHalf)
        << "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
    svg << "<line x1=\"" << fmt(kHalf) << "\" y1=\"" << fmt(kHalf - kPlotHalf)
        << "\" x2=\"" << fmt(kHalf) << "\" y2=\"" << fmt(kHalf + kPlotHalf)
        << "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";

    char extent_buf[32];
    std::snprintf(extent_buf, sizeof(extent_buf), "%.3g", extent);
    svg << "<text x=\"" << fmt(kHalf + kPlotHalf - 4) << "\" y=\""
        << fmt(kHalf + 14) << "\" font-size=\"10\" text-anchor=\"end\" "
        << "fill=\"#555555\">" << extent_buf << "</text>\n";
    svg << "<text x=\"" << fmt(kHalf + kPlotHalf) << "\" y=\""
        << fmt(kHalf - 8) << "\" font-size=\"11\" text-anchor=\"end\">"
        << xml_escape(x_label) << "</text>\n";
    svg << "<text x=\"" << fmt(kHalf + 6) << "\" y=\""
        << fmt(kHalf - kPlotHalf + 10) << "\" font-size=\"11\">"
        << xml_escape(y_label) << "</text>\n";

    // legend, one row per cloud
    for (std::size_t ci = 0; ci < clouds.size(); ++ci) {
        const double ly = 18.0 + 16.0 * static_cast<double>(ci);
        svg << "<g>";
        emit_glyph(svg, ci, 16.0, ly - 3.0, kColors[ci % kNumColors]);
        svg << "<text x=\"26\" y=\"" << fmt(ly) << "\" font-size=\"11\">"
            << xml_escape(clouds[ci].name) << "</text></g>\n";
    }

    for (std::size_t ci = 0; ci < clouds.size(); ++ci) {
        const auto& cloud = clouds[ci];
        if (cloud.labels.size() != cloud.points.size())
            throw std::invalid_argument("cloud " + cloud.name +
                                        ": label/point count mismatch");
        svg << "<g>\n";
        for (std::size_t i = 0; i < cloud.points.size(); ++i) {
            const double x = px(cloud.points[i][0]);
            const double y = py(cloud.points[i][1]);
            emit_glyph(svg, ci, x, y, kColors[ci % kNumColors]);
            svg << "<text x=\"" << fmt(x + 7) << "\" y=\"" << fmt(y + 3.5)
                << "\" font-size=\"10\">" << xml_escape(cloud.labels[i])
                << "</text>\n";
        }
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_biplot_svg(const std::string& path,
                      const std::vector<Cloud>& clouds,
                      const std::string& x_label, const std::string& y_label) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << render_biplot(clouds, x_label, y_label);
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace mwca::plot
