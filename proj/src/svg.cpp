// SPDX-License-Identifier: Apache-2.0
#include "riscav/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "riscav/errors.hpp"
#include "riscav/format.hpp"

namespace riscav::svg {

namespace {

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range axis_range(double lo, double hi) {
    if (!(hi > lo)) {
        double pad = std::abs(lo) > 0.0 ? std::abs(lo) * 0.5 : 0.5;
        return {lo - pad, hi + pad};
    }
    double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

// Round tick spacing to 1/2/5 * 10^k.
std::vector<double> ticks(const Range& r, int target) {
    double span = r.hi - r.lo;
    double raw = span / std::max(target, 2);
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double norm = raw / mag;
    double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
    step *= mag;
    std::vector<double> out;
    double first = std::ceil(r.lo / step) * step;
    for (double v = first; v <= r.hi + step * 1e-9; v += step)
        out.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    return out;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_line_plot(const PlotSpec& spec, std::span<const Series> series) {
    constexpr int margin_left = 78;
    constexpr int margin_right = 24;
    constexpr int margin_top = 46;
    constexpr int margin_bottom = 58;
    int plot_w = spec.width - margin_left - margin_right;
    int plot_h = spec.height - margin_top - margin_bottom;

    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    double y_min = x_min;
    double y_max = -x_min;
    for (const Series& s : series)
        for (auto [x, y] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    if (!std::isfinite(x_min)) { // no points at all
        x_min = x_max = y_min = y_max = 0.0;
    }
    Range xr = axis_range(x_min, x_max);
    Range yr = axis_range(y_min, y_max);

    auto px = [&](double x) {
        return margin_left + (x - xr.lo) / (xr.hi - xr.lo) * plot_w;
    };
    auto py = [&](double y) {
        return margin_top + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h;
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << spec.width / 2 << "\" y=\"26\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(spec.title)
        << "</text>\n";

    // Axes, ticks, grid.
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (double t : ticks(xr, 8)) {
        double x = px(t);
        out << "<line x1=\"" << format_sig(x) << "\" y1=\"" << margin_top << "\" x2=\""
            << format_sig(x) << "\" y2=\"" << margin_top + plot_h
            << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << format_sig(x) << "\" y=\"" << margin_top + plot_h + 18
            << "\" text-anchor=\"middle\">" << format_sig(t) << "</text>\n";
    }
    for (double t : ticks(yr, 6)) {
        double y = py(t);
        out << "<line x1=\"" << margin_left << "\" y1=\"" << format_sig(y) << "\" x2=\""
            << margin_left + plot_w << "\" y2=\"" << format_sig(y)
            << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << margin_left - 8 << "\" y=\"" << format_sig(y + 4)
            << "\" text-anchor=\"end\">" << format_sig(t) << "</text>\n";
    }
    out << "</g>\n";
    out << "<rect x=\"" << margin_left << "\" y=\"" << margin_top << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << margin_left + plot_w / 2 << "\" y=\"" << spec.height - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << xml_escape(spec.x_label) << "</text>\n";
    out << "<text x=\"20\" y=\"" << margin_top + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << margin_top + plot_h / 2 << ")\">"
        << xml_escape(spec.y_label) << "</text>\n";

    for (const Series& s : series) {
        if (s.points.empty())
            continue;
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.4\" points=\"";
        for (auto [x, y] : s.points)
            out << format_sig(px(x)) << "," << format_sig(py(y)) << " ";
        out << "\"/>\n";
    }

    if (spec.legend) {
        int ly = margin_top + 12;
        for (const Series& s : series) {
            int lx = margin_left + plot_w - 150;
            out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 26 << "\" y2=\""
                << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << lx + 32 << "\" y=\"" << ly + 4
                << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.label)
                << "</text>\n";
            ly += 18;
        }
    }
    out << "</svg>\n";
    return out.str();
}

void write_line_plot(const std::filesystem::path& path, const PlotSpec& spec,
                     std::span<const Series> series) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << render_line_plot(spec, series);
    if (!out)
        throw IoError("write failed for " + path.string());
}

} // namespace riscav::svg
