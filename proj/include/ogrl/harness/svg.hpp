#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ogrl::harness {

struct LineSeries {
    std::string name;
    std::vector<double> values; // plotted against 1-based index
};

/// Standalone SVG line chart; the y axis spans [0, 1].
std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<LineSeries>& series);

struct BarGroup {
    std::string label;
    std::vector<std::optional<double>> values; // one per series; empty = missing
    std::vector<std::optional<double>> errors;
};

/// Standalone SVG grouped bar chart with optional error bars; the y axis spans [0, 1].
std::string grouped_bar_svg(const std::string& title, const std::vector<std::string>& series_names,
                            const std::vector<BarGroup>& groups);

std::string xml_escape(const std::string& text);

} // namespace ogrl::harness
