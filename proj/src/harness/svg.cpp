#include "ogrl/harness/svg.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace ogrl::harness {

namespace {

constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr double width = 640;
constexpr double height = 400;
constexpr double left = 60;
constexpr double right = 150;
constexpr double top = 40;
constexpr double bottom = 50;

std::string num(double v)
{
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

double plot_y(double v)
{
    return top + (height - top - bottom) * (1.0 - std::clamp(v, 0.0, 1.0));
}

void frame(std::ostringstream& svg, const std::string& title, const std::string& x_label, const std::string& y_label)
{
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
        << "</text>\n";
    const double x1 = width - right;
    const double y1 = height - bottom;
    svg << "<line x1=\"" << left << "\" y1=\"" << y1 << "\" x2=\"" << x1 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = i / 4.0;
        svg << "<text x=\"" << left - 6 << "\" y=\"" << num(plot_y(v) + 4) << "\" text-anchor=\"end\">" << num(v)
            << "</text>\n";
        svg << "<line x1=\"" << left << "\" y1=\"" << num(plot_y(v)) << "\" x2=\"" << x1 << "\" y2=\""
            << num(plot_y(v)) << "\" stroke=\"#dddddd\"/>\n";
    }
    svg << "<text x=\"" << (left + x1) / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
        << xml_escape(x_label) << "</text>\n";
    svg << "<text transform=\"translate(16," << (top + y1) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << xml_escape(y_label) << "</text>\n";
}

void legend(std::ostringstream& svg, const std::vector<std::string>& names)
{
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double y = top + 18.0 * static_cast<double>(i);
        svg << "<rect x=\"" << width - right + 14 << "\" y=\"" << y << "\" width=\"12\" height=\"12\" fill=\""
            << palette[i % palette.size()] << "\"/>\n";
        svg << "<text x=\"" << width - right + 32 << "\" y=\"" << y + 10 << "\">" << xml_escape(names[i])
            << "</text>\n";
    }
}

} // namespace

std::string xml_escape(const std::string& text)
{
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

std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<LineSeries>& series)
{
    std::ostringstream svg;
    frame(svg, title, x_label, y_label);
    std::size_t longest = 1;
    for (const auto& s : series)
        longest = std::max(longest, s.values.size());
    const double span = width - right - left;
    auto plot_x = [&](std::size_t i) {
        return longest == 1 ? left + span / 2 : left + span * static_cast<double>(i) / static_cast<double>(longest - 1);
    };
    std::vector<std::string> names;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        names.push_back(s.name);
        const char* color = palette[k % palette.size()];
        if (s.values.size() > 1) {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
            for (std::size_t i = 0; i < s.values.size(); ++i)
                svg << num(plot_x(i)) << ',' << num(plot_y(s.values[i])) << ' ';
            svg << "\"/>\n";
        }
        for (std::size_t i = 0; i < s.values.size(); ++i)
            svg << "<circle cx=\"" << num(plot_x(i)) << "\" cy=\"" << num(plot_y(s.values[i])) << "\" r=\"2.5\" fill=\""
                << color << "\"/>\n";
    }
    legend(svg, names);
    svg << "</svg>\n";
    return svg.str();
}

std::string grouped_bar_svg(const std::string& title, const std::vector<std::string>& series_names,
                            const std::vector<BarGroup>& groups)
{
    std::ostringstream svg;
    frame(svg, title, "", "success rate");
    const double span = width - right - left;
    const double group_w = groups.empty() ? span : span / static_cast<double>(groups.size());
    const double bar_w = group_w * 0.8 / static_cast<double>(std::max<std::size_t>(1, series_names.size()));
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double gx = left + group_w * static_cast<double>(g) + group_w * 0.1;
        for (std::size_t k = 0; k < groups[g].values.size(); ++k) {
            const double x = gx + bar_w * static_cast<double>(k);
            const auto& v = groups[g].values[k];
            if (!v) {
                svg << "<text x=\"" << num(x + bar_w / 2) << "\" y=\"" << num(plot_y(0) - 4)
                    << "\" text-anchor=\"middle\" font-size=\"9\">NA</text>\n";
                continue;
            }
            svg << "<rect x=\"" << num(x) << "\" y=\"" << num(plot_y(*v)) << "\" width=\"" << num(bar_w * 0.9)
                << "\" height=\"" << num(plot_y(0) - plot_y(*v)) << "\" fill=\"" << palette[k % palette.size()]
                << "\"/>\n";
            if (k < groups[g].errors.size() && groups[g].errors[k]) {
                const double cx = x + bar_w * 0.45;
                svg << "<line x1=\"" << num(cx) << "\" y1=\"" << num(plot_y(*v - *groups[g].errors[k])) << "\" x2=\""
                    << num(cx) << "\" y2=\"" << num(plot_y(*v + *groups[g].errors[k])) << "\" stroke=\"black\"/>\n";
            }
        }
        svg << "<text x=\"" << num(gx + group_w * 0.4) << "\" y=\"" << num(plot_y(0) + 16)
            << "\" text-anchor=\"middle\" font-size=\"10\">" << xml_escape(groups[g].label) << "</text>\n";
    }
    legend(svg, series_names);
    svg << "</svg>\n";
    return svg.str();
}

} // namespace ogrl::harness
