#include "vpmine/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace vpmine {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
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

// Round a raw tick step to 1, 2 or 5 times a power of ten.
double nice_step(double range, int target_ticks) {
    if (range <= 0.0) return 1.0;
    const double raw = range / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double step;
    if (frac <= 1.0)
        step = 1.0;
    else if (frac <= 2.0)
        step = 2.0;
    else if (frac <= 5.0)
        step = 5.0;
    else
        step = 10.0;
    return step * mag;
}

} // namespace

std::string render_line_chart(const ChartSpec& spec) {
    if (spec.x.empty()) throw std::invalid_argument("chart needs at least one x position");
    for (const ChartSeries& s : spec.series)
        if (s.mean.size() != spec.x.size() || s.sd.size() != spec.x.size())
            throw std::invalid_argument("series length does not match x positions");

    constexpr double W = 720, H = 460;
    constexpr double ML = 80, MR = 30, MT = 50, MB = 70;
    const double plot_w = W - ML - MR;
    const double plot_h = H - MT - MB;

    double x_min = spec.x.front(), x_max = spec.x.front();
    for (double v : spec.x) {
        x_min = std::min(x_min, v);
        x_max = std::max(x_max, v);
    }
    if (x_min == x_max) {
        x_min -= 1.0;
        x_max += 1.0;
    }

    double y_max = 0.0;
    for (const ChartSeries& s : spec.series)
        for (std::size_t i = 0; i < s.mean.size(); ++i)
            y_max = std::max(y_max, s.mean[i] + s.sd[i]);
    if (y_max <= 0.0) y_max = 1.0;
    y_max *= 1.05;
    const double y_min = 0.0;

    auto px = [&](double v) { return ML + (v - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double v) { return MT + plot_h - (v - y_min) / (y_max - y_min) * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(W) + "\" height=\"" +
           fmt(H) + "\" viewBox=\"0 0 " + fmt(W) + " " + fmt(H) + "\">\n";
    svg += "<rect width=\"" + fmt(W) + "\" height=\"" + fmt(H) + "\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(W / 2) + "\" y=\"28\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"17\">" +
           escape(spec.title) + "</text>\n";

    // axes
    svg += "<line x1=\"" + fmt(ML) + "\" y1=\"" + fmt(MT + plot_h) + "\" x2=\"" +
           fmt(ML + plot_w) + "\" y2=\"" + fmt(MT + plot_h) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(ML) + "\" y1=\"" + fmt(MT) + "\" x2=\"" + fmt(ML) + "\" y2=\"" +
           fmt(MT + plot_h) + "\" stroke=\"black\"/>\n";

    for (double v : spec.x) {
        const double X = px(v);
        svg += "<line x1=\"" + fmt(X) + "\" y1=\"" + fmt(MT + plot_h) + "\" x2=\"" + fmt(X) +
               "\" y2=\"" + fmt(MT + plot_h + 6) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(X) + "\" y=\"" + fmt(MT + plot_h + 24) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + fmt(v) +
               "</text>\n";
    }
    const double step = nice_step(y_max - y_min, 6);
    for (double v = y_min; v <= y_max + 1e-12 * y_max; v += step) {
        const double Y = py(v);
        svg += "<line x1=\"" + fmt(ML - 6) + "\" y1=\"" + fmt(Y) + "\" x2=\"" + fmt(ML) +
               "\" y2=\"" + fmt(Y) + "\" stroke=\"black\"/>\n";
        svg += "<line x1=\"" + fmt(ML) + "\" y1=\"" + fmt(Y) + "\" x2=\"" + fmt(ML + plot_w) +
               "\" y2=\"" + fmt(Y) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + fmt(ML - 10) + "\" y=\"" + fmt(Y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\">" + fmt(v) +
               "</text>\n";
    }
    svg += "<text x=\"" + fmt(ML + plot_w / 2) + "\" y=\"" + fmt(H - 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
           escape(spec.x_label) + "</text>\n";
    svg += "<text x=\"20\" y=\"" + fmt(MT + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
           "transform=\"rotate(-90 20 " +
           fmt(MT + plot_h / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

    // sd bands under the lines
    for (const ChartSeries& s : spec.series) {
        std::string pts;
        for (std::size_t i = 0; i < spec.x.size(); ++i)
            pts += fmt(px(spec.x[i])) + "," + fmt(py(std::max(y_min, s.mean[i] + s.sd[i]))) + " ";
        for (std::size_t i = spec.x.size(); i-- > 0;)
            pts += fmt(px(spec.x[i])) + "," + fmt(py(std::max(y_min, s.mean[i] - s.sd[i]))) + " ";
        svg += "<polygon points=\"" + pts + "\" fill=\"" + s.color +
               "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }
    for (const ChartSeries& s : spec.series) {
        std::string pts;
        for (std::size_t i = 0; i < spec.x.size(); ++i)
            pts += fmt(px(spec.x[i])) + "," + fmt(py(s.mean[i])) + " ";
        svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"2\"/>\n";
        for (std::size_t i = 0; i < spec.x.size(); ++i)
            svg += "<circle cx=\"" + fmt(px(spec.x[i])) + "\" cy=\"" + fmt(py(s.mean[i])) +
                   "\" r=\"3.5\" fill=\"" + s.color + "\"/>\n";
    }

    // legend
    double ly = MT + 10;
    for (const ChartSeries& s : spec.series) {
        const double lx = ML + plot_w - 170;
        svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(lx + 26) +
               "\" y2=\"" + fmt(ly) + "\" stroke=\"" + s.color + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt(lx + 32) + "\" y=\"" + fmt(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"13\">" + escape(s.label) + "</text>\n";
        ly += 18;
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace vpmine
