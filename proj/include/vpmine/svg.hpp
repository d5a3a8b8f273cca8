#pragma once

#include <string>
#include <vector>

namespace vpmine {

struct ChartSeries {
    std::string label;
    std::string color;
    std::vector<double> mean; // one entry per x position
    std::vector<double> sd;   // same length; drawn as a +-1 sd band
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<ChartSeries> series;
};

/// Self-contained SVG line chart: mean lines with point markers and a
/// translucent +-1 sd band per series, linear axes with ticks and a legend.
std::string render_line_chart(const ChartSpec& spec);

} // namespace vpmine
