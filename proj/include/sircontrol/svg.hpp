#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sir::svg {

struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<double> h_lines; // dashed horizontal reference lines
    std::optional<double> y_min;
    std::optional<double> y_max;
};

// Minimal static line-plot writer; panels are stacked vertically.
void write(const std::filesystem::path& file, const std::vector<Panel>& panels, int width = 760,
           int panel_height = 300);

} // namespace sir::svg
