#include "pdm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pdm::io {

namespace {

constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    // avoid "-0.00"
    std::string s = buf;
    if (s.find_first_not_of("-0.") == std::string::npos) s = s.substr(s.front() == '-' ? 1 : 0);
    return s;
}

std::string label_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
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

void widen(double& lo, double& hi, double margin) {
    const double span = hi - lo;
    if (span > 0.0) {
        lo -= margin * span;
        hi += margin * span;
    } else {
        const double half = std::max(0.5, 0.5 * std::abs(lo));
        lo -= half;
        hi += half;
    }
}

}  // namespace

Bounds padded_bounds(std::span<const Point2> points, double margin) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    Bounds b{inf, -inf, inf, -inf};
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
        b.xmin = std::min(b.xmin, p.x);
        b.xmax = std::max(b.xmax, p.x);
        b.ymin = std::min(b.ymin, p.y);
        b.ymax = std::max(b.ymax, p.y);
    }
    if (b.xmin > b.xmax) throw std::invalid_argument("no finite points to bound");
    widen(b.xmin, b.xmax, margin);
    widen(b.ymin, b.ymax, margin);
    return b;
}

std::string render_svg(std::span<const Point2> points, const AxesSpec& axes) {
    if (points.empty()) throw std::invalid_argument("refusing to render an empty dataset");
    const Bounds b = padded_bounds(points);
    const double w = axes.width, h = axes.height;
    const double pw = w - kLeft - kRight, ph = h - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - b.xmin) / (b.xmax - b.xmin) * pw; };
    const auto py = [&](double y) { return kTop + (b.ymax - y) / (b.ymax - b.ymin) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << axes.width << "\" height=\""
       << axes.height << "\" viewBox=\"0 0 " << axes.width << ' ' << axes.height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!axes.metadata.empty()) {
        os << "<desc>\n";
        for (const auto& line : axes.metadata) os << escape(line) << '\n';
        os << "</desc>\n";
    }
    os
       << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(pw)
       << "\" height=\"" << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (!axes.title.empty()) {
        os << "<text x=\"" << fixed(w / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
           << escape(axes.title) << "</text>\n";
    }
    if (!axes.annotation.empty()) {
        os << "<text x=\"" << fixed(w - kRight) << "\" y=\"34\" text-anchor=\"end\" font-size=\"10\">"
           << escape(axes.annotation) << "</text>\n";
    }
    const double base = kTop + ph;
    os << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"" << fixed(h - 10)
       << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(axes.x_label) << "</text>\n"
       << "<text x=\"15\" y=\"" << fixed(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"12\" "
       << "transform=\"rotate(-90 15 " << fixed(kTop + ph / 2) << ")\">" << escape(axes.y_label)
       << "</text>\n"
       << "<text x=\"" << fixed(kLeft) << "\" y=\"" << fixed(base + 15)
       << "\" text-anchor=\"start\" font-size=\"10\">" << label_number(b.xmin) << "</text>\n"
       << "<text x=\"" << fixed(kLeft + pw) << "\" y=\"" << fixed(base + 15)
       << "\" text-anchor=\"end\" font-size=\"10\">" << label_number(b.xmax) << "</text>\n"
       << "<text x=\"" << fixed(kLeft - 5) << "\" y=\"" << fixed(base)
       << "\" text-anchor=\"end\" font-size=\"10\">" << label_number(b.ymin) << "</text>\n"
       << "<text x=\"" << fixed(kLeft - 5) << "\" y=\"" << fixed(kTop + 10)
       << "\" text-anchor=\"end\" font-size=\"10\">" << label_number(b.ymax) << "</text>\n";
    os << "<g fill=\"black\">\n";
    const std::string r = fixed(axes.marker_radius);
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
        os << "<circle cx=\"" << fixed(px(p.x)) << "\" cy=\"" << fixed(py(p.y)) << "\" r=\"" << r
           << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace pdm::io
