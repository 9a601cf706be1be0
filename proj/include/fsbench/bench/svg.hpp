#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <tuple>
#include <vector>

#include "fsbench/core/error.hpp"

namespace fsbench {

namespace svg {

inline std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline const std::vector<std::string>& palette() {
    static const std::vector<std::string> colors = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors;
}

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct Frame {
    double width = 860, height = 520;
    double left = 70, right = 200, top = 48, bottom = 64;
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;

    double px(double x) const {
        return left + (x - x_min) / (x_max - x_min) * (width - left - right);
    }
    double py(double y) const {
        return height - bottom - (y - y_min) / (y_max - y_min) * (height - top - bottom);
    }
};

inline void open_document(std::string& out, const Frame& f, const std::string& title) {
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(f.width) +
           "\" height=\"" + num(f.height) + "\" viewBox=\"0 0 " + num(f.width) + " " +
           num(f.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(f.width / 2) + "\" y=\"26\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + escape(title) + "</text>\n";
}

inline void draw_axes(std::string& out, const Frame& f, const std::string& x_label,
                      const std::string& y_label, int ticks = 5) {
    const double x0 = f.left, x1 = f.width - f.right;
    const double y0 = f.height - f.bottom, y1 = f.top;
    out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) +
           "\" y2=\"" + num(y0) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) +
           "\" y2=\"" + num(y1) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= ticks; ++i) {
        const double tx = f.x_min + (f.x_max - f.x_min) * i / ticks;
        const double ty = f.y_min + (f.y_max - f.y_min) * i / ticks;
        out += "<line x1=\"" + num(f.px(tx)) + "\" y1=\"" + num(y0) + "\" x2=\"" +
               num(f.px(tx)) + "\" y2=\"" + num(y0 + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + num(f.px(tx)) + "\" y=\"" + num(y0 + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               num(tx) + "</text>\n";
        out += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(f.py(ty)) + "\" x2=\"" +
               num(x0) + "\" y2=\"" + num(f.py(ty)) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(f.py(ty) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               num(ty) + "</text>\n";
    }
    out += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(f.height - 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           escape(x_label) + "</text>\n";
    out += "<text x=\"18\" y=\"" + num((y0 + y1) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " + num((y0 + y1) / 2) + ")\">" + escape(y_label) +
           "</text>\n";
}

inline void draw_legend(std::string& out, const Frame& f,
                        const std::vector<std::string>& names) {
    const double lx = f.width - f.right + 16;
    double ly = f.top + 8;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto& color = palette()[i % palette().size()];
        out += "<rect x=\"" + num(lx) + "\" y=\"" + num(ly - 9) +
               "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
        out += "<text x=\"" + num(lx + 18) + "\" y=\"" + num(ly + 2) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(names[i]) +
               "</text>\n";
        ly += 18;
    }
}

} // namespace svg

/// AUROC-vs-proportion line chart, one series per method.
inline std::string svg_line_chart(const std::string& title, const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<svg::Series>& series) {
    if (series.empty()) throw DataError("svg_line_chart: no series");
    svg::Frame f;
    f.x_min = 1e300;
    f.x_max = -1e300;
    f.y_min = 1e300;
    f.y_max = -1e300;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            f.x_min = std::min(f.x_min, x);
            f.x_max = std::max(f.x_max, x);
            f.y_min = std::min(f.y_min, y);
            f.y_max = std::max(f.y_max, y);
        }
    if (f.x_min == f.x_max) { f.x_min -= 0.5; f.x_max += 0.5; }
    const double pad = std::max((f.y_max - f.y_min) * 0.1, 0.02);
    f.y_min -= pad;
    f.y_max += pad;

    std::string out;
    svg::open_document(out, f, title);
    svg::draw_axes(out, f, x_label, y_label);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& color = svg::palette()[i % svg::palette().size()];
        std::string poly = "<polyline fill=\"none\" stroke=\"" + color +
                           "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : series[i].points)
            poly += svg::num(f.px(x)) + "," + svg::num(f.py(y)) + " ";
        poly += "\"/>\n";
        out += poly;
        for (const auto& [x, y] : series[i].points)
            out += "<circle cx=\"" + svg::num(f.px(x)) + "\" cy=\"" + svg::num(f.py(y)) +
                   "\" r=\"3\" fill=\"" + color + "\"/>\n";
        names.push_back(series[i].name);
    }
    svg::draw_legend(out, f, names);
    out += "</svg>\n";
    return out;
}

/// Horizontal bar chart; items are drawn in the given order (callers sort by
/// value descending for the Fig-1 convention).
inline std::string svg_bar_chart(const std::string& title, const std::string& x_label,
                                 const std::vector<std::pair<std::string, double>>& items) {
    if (items.empty()) throw DataError("svg_bar_chart: no items");
    svg::Frame f;
    f.right = 40;
    f.left = 220;
    f.height = std::max(180.0, 90.0 + 32.0 * static_cast<double>(items.size()));
    f.x_min = 0.0;
    f.x_max = 0.0;
    for (const auto& [_, v] : items) f.x_max = std::max(f.x_max, v);
    if (f.x_max <= 0.0) f.x_max = 1.0;
    f.x_max *= 1.05;

    std::string out;
    svg::open_document(out, f, title);
    const double y0 = f.height - f.bottom;
    out += "<line x1=\"" + svg::num(f.left) + "\" y1=\"" + svg::num(y0) + "\" x2=\"" +
           svg::num(f.width - f.right) + "\" y2=\"" + svg::num(y0) +
           "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double tx = f.x_max * i / 5;
        out += "<text x=\"" + svg::num(f.px(tx)) + "\" y=\"" + svg::num(y0 + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               svg::num(tx) + "</text>\n";
    }
    const double band = (y0 - f.top) / static_cast<double>(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        const double y = f.top + band * static_cast<double>(i) + band * 0.15;
        const double h = band * 0.7;
        const auto& color = svg::palette()[i % svg::palette().size()];
        out += "<rect x=\"" + svg::num(f.left) + "\" y=\"" + svg::num(y) + "\" width=\"" +
               svg::num(f.px(items[i].second) - f.left) + "\" height=\"" + svg::num(h) +
               "\" fill=\"" + color + "\"/>\n";
        out += "<text x=\"" + svg::num(f.left - 8) + "\" y=\"" + svg::num(y + h / 2 + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               svg::escape(items[i].first) + "</text>\n";
        out += "<text x=\"" + svg::num(f.px(items[i].second) + 4) + "\" y=\"" +
               svg::num(y + h / 2 + 4) + "\" font-family=\"sans-serif\" font-size=\"10\">" +
               svg::num(items[i].second) + "</text>\n";
    }
    out += "<text x=\"" + svg::num((f.left + f.width - f.right) / 2) + "\" y=\"" +
           svg::num(f.height - 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           svg::escape(x_label) + "</text>\n";
    out += "</svg>\n";
    return out;
}

/// Runtime-vs-AUROC scatter, one labeled mark per method.
inline std::string svg_scatter(const std::string& title, const std::string& x_label,
                               const std::string& y_label,
                               const std::vector<std::tuple<std::string, double, double>>& points) {
    if (points.empty()) throw DataError("svg_scatter: no points");
    svg::Frame f;
    f.right = 60;
    f.x_min = 1e300;
    f.x_max = -1e300;
    f.y_min = 1e300;
    f.y_max = -1e300;
    for (const auto& [_, x, y] : points) {
        f.x_min = std::min(f.x_min, x);
        f.x_max = std::max(f.x_max, x);
        f.y_min = std::min(f.y_min, y);
        f.y_max = std::max(f.y_max, y);
    }
    const double xpad = std::max((f.x_max - f.x_min) * 0.15, 1e-6);
    const double ypad = std::max((f.y_max - f.y_min) * 0.15, 0.01);
    f.x_min -= xpad;
    f.x_max += xpad;
    f.y_min -= ypad;
    f.y_max += ypad;

    std::string out;
    svg::open_document(out, f, title);
    svg::draw_axes(out, f, x_label, y_label);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& [name, x, y] = points[i];
        const auto& color = svg::palette()[i % svg::palette().size()];
        out += "<circle cx=\"" + svg::num(f.px(x)) + "\" cy=\"" + svg::num(f.py(y)) +
               "\" r=\"5\" fill=\"" + color + "\"/>\n";
        out += "<text x=\"" + svg::num(f.px(x) + 8) + "\" y=\"" + svg::num(f.py(y) + 4) +
               "\" font-family=\"sans-serif\" font-size=\"10\">" + svg::escape(name) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

/// Plain text table rendered as SVG (selection paths).
inline std::string svg_table(const std::string& title,
                             const std::vector<std::string>& headers,
                             const std::vector<std::vector<std::string>>& rows) {
    const double row_h = 24;
    const double col_w = 240;
    svg::Frame f;
    f.width = 40 + col_w * static_cast<double>(headers.size());
    f.height = 80 + row_h * static_cast<double>(rows.size() + 1);

    std::string out;
    svg::open_document(out, f, title);
    double y = 60;
    double x = 20;
    for (const auto& h : headers) {
        out += "<text x=\"" + svg::num(x) + "\" y=\"" + svg::num(y) +
               "\" font-family=\"sans-serif\" font-size=\"12\" font-weight=\"bold\">" +
               svg::escape(h) + "</text>\n";
        x += col_w;
    }
    for (const auto& row : rows) {
        y += row_h;
        x = 20;
        for (const auto& cell : row) {
            out += "<text x=\"" + svg::num(x) + "\" y=\"" + svg::num(y) +
                   "\" font-family=\"sans-serif\" font-size=\"11\">" + svg::escape(cell) +
                   "</text>\n";
            x += col_w;
        }
    }
    out += "</svg>\n";
    return out;
}

} // namespace fsbench
