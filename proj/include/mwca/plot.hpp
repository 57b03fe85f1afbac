#pragma once

#include <array>
#include <string>
#include <vector>

namespace mwca::plot {

/// One point cloud of the biplot: a mode with its labeled 2-d coordinates.
struct Cloud {
    std::string name;
    std::vector<std::string> labels;
    std::vector<std::array<double, 2>> points;
};

/// Deterministic SVG scatter of all clouds in one frame: equal aspect,
/// symmetric about the origin with 5% padding, one glyph and color per
/// cloud, labels rendered as text anchors next to their points.
std::string render_biplot(const std::vector<Cloud>& clouds,
                          const std::string& x_label,
                          const std::string& y_label);

void write_biplot_svg(const std::string& path,
                      const std::vector<Cloud>& clouds,
                      const std::string& x_label, const std::string& y_label);

}  // namespace mwca::plot
