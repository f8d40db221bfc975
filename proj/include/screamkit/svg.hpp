#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "screamkit/metrics.hpp"
#include "screamkit/tsne.hpp"

namespace screamkit {

namespace detail {

// fixed-format floats keep the emitted bytes deterministic
inline std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline const std::vector<std::string>& palette()
{
    static const std::vector<std::string> colors = {"#4e79a7", "#f28e2b", "#e15759",
                                                    "#76b7b2", "#59a14f", "#edc948"};
    return colors;
}

inline std::string svg_open(int width, int height)
{
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
           " " + std::to_string(height) + "\">\n";
}

inline std::string text_at(double x, double y, const std::string& s, int size = 12,
                           const std::string& anchor = "middle")
{
    return "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-size=\"" + std::to_string(size) +
           "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
}

} // namespace detail

/// Bar chart of per-class recall, one bar per class, heights proportional
/// to recall in [0, 1].
inline std::string svg_recall_bar_chart(const std::vector<std::string>& names,
                                        const std::vector<double>& recalls)
{
    const int width = 80 * static_cast<int>(names.size()) + 80;
    const int height = 320;
    const double plot_h = 240.0, base_y = 280.0;

    std::string svg = detail::svg_open(width, height);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double h = std::clamp(recalls[i], 0.0, 1.0) * plot_h;
        const double x = 60.0 + 80.0 * static_cast<double>(i);
        const auto& color = detail::palette()[i % detail::palette().size()];
        svg += "<rect class=\"bar\" x=\"" + detail::fmt(x) + "\" y=\"" + detail::fmt(base_y - h) +
               "\" width=\"50\" height=\"" + detail::fmt(h) + "\" fill=\"" + color + "\"/>\n";
        svg += detail::text_at(x + 25.0, base_y + 16.0, names[i]);
        svg += detail::text_at(x + 25.0, base_y - h - 6.0, detail::fmt(recalls[i]), 11);
    }
    svg += "</svg>\n";
    return svg;
}

/// Confusion heatmap: rows = true class, columns = predicted, cell shade
/// scaled by the row maximum.
inline std::string svg_confusion_heatmap(const ConfusionMatrix& cm)
{
    const int k = static_cast<int>(cm.k());
    const int cell = 56;
    const int width = 100 + cell * k + 20;
    const int height = 80 + cell * k + 20;

    std::string svg = detail::svg_open(width, height);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int i = 0; i < k; ++i) {
        std::int64_t row_max = 0;
        for (int j = 0; j < k; ++j)
            row_max = std::max(row_max, cm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        for (int j = 0; j < k; ++j) {
            const std::int64_t c = cm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            const double shade = row_max > 0 ? static_cast<double>(c) / static_cast<double>(row_max) : 0.0;
            const int level = 255 - static_cast<int>(shade * 180.0);
            char color[8];
            std::snprintf(color, sizeof color, "#%02x%02xff", level, level);
            const int x = 100 + j * cell, y = 80 + i * cell;
            svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
                   std::to_string(cell) + "\" height=\"" + std::to_string(cell) + "\" fill=\"" +
                   color + "\" stroke=\"#888\"/>\n";
            svg += detail::text_at(x + cell / 2.0, y + cell / 2.0 + 4.0, std::to_string(c));
        }
        svg += detail::text_at(90.0, 80.0 + i * cell + cell / 2.0 + 4.0, cm.names[static_cast<std::size_t>(i)], 12, "end");
    }
    for (int j = 0; j < k; ++j)
        svg += detail::text_at(100.0 + j * cell + cell / 2.0, 70.0, cm.names[static_cast<std::size_t>(j)]);
    svg += "</svg>\n";
    return svg;
}

/// t-SNE scatter colored by label.
inline std::string svg_projection_scatter(const Projection2D& proj,
                                          const std::vector<std::string>& label_names)
{
    const int width = 640, height = 640;
    double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;
    if (!proj.points.empty()) {
        min_x = max_x = proj.points[0][0];
        min_y = max_y = proj.points[0][1];
        for (const auto& p : proj.points) {
            min_x = std::min(min_x, p[0]);
            max_x = std::max(max_x, p[0]);
            min_y = std::min(min_y, p[1]);
            max_y = std::max(max_y, p[1]);
        }
    }
    const double span_x = std::max(max_x - min_x, 1e-9);
    const double span_y = std::max(max_y - min_y, 1e-9);

    std::string svg = detail::svg_open(width, height);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < proj.points.size(); ++i) {
        const double x = 40.0 + (proj.points[i][0] - min_x) / span_x * (width - 80.0);
        const double y = 40.0 + (proj.points[i][1] - min_y) / span_y * (height - 80.0);
        const int label = i < proj.labels.size() ? proj.labels[i] : 0;
        const auto& color =
            detail::palette()[static_cast<std::size_t>(label) % detail::palette().size()];
        svg += "<circle cx=\"" + detail::fmt(x) + "\" cy=\"" + detail::fmt(y) +
               "\" r=\"4\" fill=\"" + color + "\" fill-opacity=\"0.75\"/>\n";
    }
    for (std::size_t l = 0; l < label_names.size(); ++l) {
        const auto& color = detail::palette()[l % detail::palette().size()];
        svg += "<circle cx=\"20\" cy=\"" + detail::fmt(24.0 + 18.0 * static_cast<double>(l)) +
               "\" r=\"5\" fill=\"" + color + "\"/>\n";
        svg += detail::text_at(30.0, 28.0 + 18.0 * static_cast<double>(l), label_names[l], 12, "start");
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace screamkit
