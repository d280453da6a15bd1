// SPDX-License-Identifier: Apache-2.0
//
// Dependency-free polyline plots written as standalone SVG. Output contains
// no timestamps or other run-varying metadata, so identical data produces
// identical files.
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace riscav::svg {

struct Series {
    std::string label;
    std::string color = "#1f77b4";
    std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 960;
    int height = 540;
    bool legend = true;
};

std::string render_line_plot(const PlotSpec& spec, std::span<const Series> series);

void write_line_plot(const std::filesystem::path& path, const PlotSpec& spec,
                     std::span<const Series> series);

} // namespace riscav::svg
