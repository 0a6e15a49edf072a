#pragma once

// Minimal hand-rolled SVG heatmaps for the command-line tool: one <rect> per
// grid cell, a segmented colorbar, and plain-text axis labels. No external
// renderer or font dependencies; every generated file is self-contained.
//
// Colormaps:
//   - sequential maps (intensity, spectrograms) use a blue-green-yellow ramp
//     interpolated from nine anchor colors;
//   - diverging maps (signed anisotropy) use blue -> white -> red, pinned so
//     that the data value 0 is always the white midpoint.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "padkit/constants.hpp"
#include "padkit/errors.hpp"
#include "padkit/optimizer.hpp"
#include "padkit/pad.hpp"

namespace padkit {

namespace detail {

struct Rgb {
    double r, g, b;
};

inline Rgb lerp(const Rgb& a, const Rgb& b, double t) {
    return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

/// Sequential ramp, t in [0, 1].
inline Rgb sequential_color(double t) {
    static const std::array<Rgb, 9> anchors{{{68, 1, 84},
                                             {71, 44, 122},
                                             {59, 81, 139},
                                             {44, 113, 142},
                                             {33, 144, 141},
                                             {39, 173, 129},
                                             {92, 200, 99},
                                             {170, 220, 50},
                                             {253, 231, 37}}};
    t = std::min(1.0, std::max(0.0, t));
    const double u = t * static_cast<double>(anchors.size() - 1);
    const auto k = static_cast<std::size_t>(std::min(
        static_cast<double>(anchors.size() - 2), std::floor(u)));
    return lerp(anchors[k], anchors[k + 1], u - static_cast<double>(k));
}

/// Diverging ramp, t in [-1, 1] with white at 0.
inline Rgb diverging_color(double t) {
    static const Rgb blue{33, 102, 172}, white{247, 247, 247}, red{178, 24, 43};
    t = std::min(1.0, std::max(-1.0, t));
    return t < 0.0 ? lerp(white, blue, -t) : lerp(white, red, t);
}

inline std::string hex_color(const Rgb& c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(std::lround(std::min(255.0, std::max(0.0, c.r)))),
                  static_cast<int>(std::lround(std::min(255.0, std::max(0.0, c.g)))),
                  static_cast<int>(std::lround(std::min(255.0, std::max(0.0, c.b)))));
    return buf;
}

inline std::string svg_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

inline std::string svg_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", x);
    return buf;
}

} // namespace detail

/// A heatmap description: row-major values (row 0 drawn at the bottom), the
/// axis ranges it spans, and its labels. `diverging` selects the signed
/// colormap centered on zero.
struct HeatmapSpec {
    std::vector<double> values; ///< row-major [row * n_cols + col]
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    std::string title, x_label, y_label;
    bool diverging = false;
};

/// Render the heatmap as a standalone SVG document.
inline void render_heatmap_svg(std::ostream& os, const HeatmapSpec& h) {
    if (h.n_rows == 0 || h.n_cols == 0 || h.values.size() != h.n_rows * h.n_cols)
        throw ArgumentError("render_heatmap_svg: values do not match the grid shape");

    double vmin = h.values[0], vmax = h.values[0];
    for (double v : h.values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    double scale_lo = vmin, scale_hi = vmax;
    if (h.diverging) {
        const double m = std::max(std::abs(vmin), std::abs(vmax));
        scale_lo = -(scale_hi = (m > 0.0 ? m : 1.0));
    } else if (!(scale_hi > scale_lo)) {
        scale_hi = scale_lo + 1.0;
    }

    constexpr double kPlotW = 480.0, kPlotH = 360.0;
    constexpr double kLeft = 70.0, kTop = 40.0, kBottom = 50.0;
    constexpr double kBarW = 18.0, kBarGap = 18.0, kRightPad = 64.0;
    const double width = kLeft + kPlotW + kBarGap + kBarW + kRightPad;
    const double height = kTop + kPlotH + kBottom;

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::svg_num(width)
       << "\" height=\"" << detail::svg_num(height) << "\" viewBox=\"0 0 "
       << detail::svg_num(width) << ' ' << detail::svg_num(height) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    os << "<text x=\"" << detail::svg_num(kLeft + kPlotW / 2) << "\" y=\"24\" "
          "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << h.title << "</text>\n";

    const double cw = kPlotW / static_cast<double>(h.n_cols);
    const double ch = kPlotH / static_cast<double>(h.n_rows);
    for (std::size_t r = 0; r < h.n_rows; ++r)
        for (std::size_t c = 0; c < h.n_cols; ++c) {
            const double v = h.values[r * h.n_cols + c];
            const detail::Rgb color =
                h.diverging ? detail::diverging_color(v / scale_hi)
                            : detail::sequential_color((v - scale_lo) / (scale_hi - scale_lo));
            const double x = kLeft + static_cast<double>(c) * cw;
            const double y = kTop + kPlotH - static_cast<double>(r + 1) * ch;
            os << "<rect x=\"" << detail::svg_num(x) << "\" y=\"" << detail::svg_num(y)
               << "\" width=\"" << detail::svg_num(cw + 0.5) << "\" height=\""
               << detail::svg_num(ch + 0.5) << "\" fill=\"" << detail::hex_color(color)
               << "\"/>\n";
        }

    os << "<rect x=\"" << detail::svg_num(kLeft) << "\" y=\"" << detail::svg_num(kTop)
       << "\" width=\"" << detail::svg_num(kPlotW) << "\" height=\"" << detail::svg_num(kPlotH)
       << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    // Axis labels: range endpoints plus the axis name.
    const double y_axis_text = kTop + kPlotH + 18.0;
    os << "<text x=\"" << detail::svg_num(kLeft) << "\" y=\"" << detail::svg_num(y_axis_text)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       << detail::svg_label(h.x_min) << "</text>\n";
    os << "<text x=\"" << detail::svg_num(kLeft + kPlotW) << "\" y=\""
       << detail::svg_num(y_axis_text)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       << detail::svg_label(h.x_max) << "</text>\n";
    os << "<text x=\"" << detail::svg_num(kLeft + kPlotW / 2) << "\" y=\""
       << detail::svg_num(kTop + kPlotH + 38.0)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << h.x_label
       << "</text>\n";
    os << "<text x=\"" << detail::svg_num(kLeft - 8.0) << "\" y=\""
       << detail::svg_num(kTop + kPlotH)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
       << detail::svg_label(h.y_min) << "</text>\n";
    os << "<text x=\"" << detail::svg_num(kLeft - 8.0) << "\" y=\"" << detail::svg_num(kTop + 12.0)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
       << detail::svg_label(h.y_max) << "</text>\n";
    os << "<text x=\"18\" y=\"" << detail::svg_num(kTop + kPlotH / 2)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
          "transform=\"rotate(-90 18 "
       << detail::svg_num(kTop + kPlotH / 2) << ")\">" << h.y_label << "</text>\n";

    // Segmented colorbar with min/max labels.
    constexpr int kBarSegments = 48;
    const double bx = kLeft + kPlotW + kBarGap;
    for (int s = 0; s < kBarSegments; ++s) {
        const double t0 = static_cast<double>(s) / kBarSegments;
        const detail::Rgb color = h.diverging ? detail::diverging_color(2.0 * t0 - 1.0)
                                              : detail::sequential_color(t0);
        const double y = kTop + kPlotH * (1.0 - static_cast<double>(s + 1) / kBarSegments);
        os << "<rect x=\"" << detail::svg_num(bx) << "\" y=\"" << detail::svg_num(y)
           << "\" width=\"" << detail::svg_num(kBarW) << "\" height=\""
           << detail::svg_num(kPlotH / kBarSegments + 0.5) << "\" fill=\""
           << detail::hex_color(color) << "\"/>\n";
    }
    os << "<rect x=\"" << detail::svg_num(bx) << "\" y=\"" << detail::svg_num(kTop)
       << "\" width=\"" << detail::svg_num(kBarW) << "\" height=\"" << detail::svg_num(kPlotH)
       << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << detail::svg_num(bx + kBarW + 6.0) << "\" y=\""
       << detail::svg_num(kTop + kPlotH)
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << detail::svg_label(scale_lo)
       << "</text>\n";
    os << "<text x=\"" << detail::svg_num(bx + kBarW + 6.0) << "\" y=\""
       << detail::svg_num(kTop + 12.0)
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << detail::svg_label(scale_hi)
       << "</text>\n";
    os << "</svg>\n";
}

/// Intensity map of an observable grid (energy rows, angle columns).
inline void pad_intensity_svg(std::ostream& os, const PADGrid& g) {
    HeatmapSpec h;
    h.values = g.intensity;
    h.n_rows = g.n_e();
    h.n_cols = g.n_theta();
    h.x_min = constants::rad_to_deg(g.theta_grid.front());
    h.x_max = constants::rad_to_deg(g.theta_grid.back());
    h.y_min = g.e_grid.front();
    h.y_max = g.e_grid.back();
    h.title = "photoelectron intensity";
    h.x_label = "theta (deg)";
    h.y_label = "energy (eV)";
    render_heatmap_svg(os, h);
}

/// Signed anisotropy map of an observable grid.
inline void pad_anisotropy_svg(std::ostream& os, const PADGrid& g) {
    HeatmapSpec h;
    h.values = anisotropy(g);
    h.n_rows = g.n_e();
    h.n_cols = g.n_theta();
    h.x_min = constants::rad_to_deg(g.theta_grid.front());
    h.x_max = constants::rad_to_deg(g.theta_grid.back());
    h.y_min = g.e_grid.front();
    h.y_max = g.e_grid.back();
    h.title = "left-right anisotropy";
    h.x_label = "theta (deg)";
    h.y_label = "energy (eV)";
    h.diverging = true;
    render_heatmap_svg(os, h);
}

/// Signed asymmetry of a two-color scan (carrier rows, phase columns).
inline void scan_svg(std::ostream& os, const BichromaticScan& scan) {
    HeatmapSpec h;
    h.values = scan.asym;
    h.n_rows = scan.n_omega();
    h.n_cols = scan.n_phase();
    h.x_min = scan.phase.front();
    h.x_max = scan.phase.back();
    h.y_min = scan.omega_ev.front();
    h.y_max = scan.omega_ev.back();
    h.title = "two-color asymmetry";
    h.x_label = "second-harmonic phase (rad)";
    h.y_label = "fundamental carrier (eV)";
    h.diverging = true;
    render_heatmap_svg(os, h);
}

} // namespace padkit
