#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pdsc::harness {

struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y), drawn in the given order
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;
};

class EmptyChartError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Standalone SVG document: axes with ticks, one polyline per series, legend. Series are
// told apart by both colour and dash pattern. Throws EmptyChartError when no series has points.
std::string render_svg(const Chart& chart);
void write_svg(const std::string& path, const Chart& chart);

}  // namespace pdsc::harness
