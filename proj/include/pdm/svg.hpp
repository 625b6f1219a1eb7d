// Minimal scatter-plot SVG writer for phase portraits and bifurcation clouds.
#pragma once

#include <span>
#include <string>
#include <vector>

namespace pdm::io {

struct Point2 {
    double x;
    double y;
};

struct AxesSpec {
    std::string x_label = "x";
    std::string y_label = "y";
    std::string title;
    std::string annotation;
    int width = 800;
    int height = 600;
    double marker_radius = 1.0;
    /// Lines written into the document's <desc> element.
    std::vector<std::string> metadata;
};

/// Data-space window drawn by render_svg.
struct Bounds {
    double xmin, xmax, ymin, ymax;
};

/// Extent of the finite points widened by `margin` of the span on every side.
/// A zero span is widened to a unit-sized window around the value.
Bounds padded_bounds(std::span<const Point2> points, double margin = 0.05);

/// One <circle> per finite point. Throws std::invalid_argument when there is
/// nothing to draw.
std::string render_svg(std::span<const Point2> points, const AxesSpec& axes);

}  // namespace pdm::io
