#include "pdsc/harness/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pdsc/harness/csv.hpp"

namespace pdsc::harness {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 8> kColours = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr std::array<const char*, 4> kDashes = {"none", "8,4", "2,3", "10,3,2,3"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Rounds the span up to 1, 2 or 5 times a power of ten per tick.
double tick_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) return m * mag;
    }
    return 10.0 * mag;
}

struct Range {
    double lo, hi;
};

Range padded(double lo, double hi) {
    if (hi - lo < 1e-12) {
        const double pad = std::max(std::abs(lo) * 0.1, 1.0);
        return {lo - pad, hi + pad};
    }
    return {lo, hi};
}

}  // namespace

std::string render_svg(const Chart& chart) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    std::size_t drawn = 0;
    for (const auto& s : chart.series) {
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
            ++drawn;
        }
    }
    if (drawn == 0) throw EmptyChartError("refusing to draw a chart with no data points");

    ymin = std::min(ymin, 0.0);
    const Range xr = padded(xmin, xmax);
    Range yr = padded(ymin, ymax);
    const double ystep = tick_step(yr.hi - yr.lo);
    yr.hi = std::ceil(yr.hi / ystep) * ystep;
    const double xstep = tick_step(xr.hi - xr.lo);

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
           escape(chart.title) + "</text>\n";

    svg += "<g stroke=\"#444\" stroke-width=\"1\">\n";
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" +
           num(kTop + ph) + "\"/>\n";
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
           num(kTop + ph) + "\"/>\n";
    svg += "</g>\n<g font-size=\"11\" fill=\"#222\">\n";
    for (double t = std::ceil(xr.lo / xstep) * xstep; t <= xr.hi + 1e-9 * xstep; t += xstep) {
        svg += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(px(t)) + "\" y2=\"" +
               num(kTop + ph + 5) + "\" stroke=\"#444\"/>\n";
        svg += "<text x=\"" + num(px(t)) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
               tick_label(t) + "</text>\n";
    }
    for (double t = std::ceil(yr.lo / ystep) * ystep; t <= yr.hi + 1e-9 * ystep; t += ystep) {
        svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" +
               num(py(t)) + "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py(t) + 4) + "\" text-anchor=\"end\">" +
               tick_label(t) + "</text>\n";
    }
    svg += "</g>\n";
    svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 16) +
           "\" text-anchor=\"middle\" font-size=\"13\">" + escape(chart.x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
           num(kTop + ph / 2) + ")\">" + escape(chart.y_label) + "</text>\n";

    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        const auto& s = chart.series[i];
        const char* colour = kColours[i % kColours.size()];
        const char* dash = kDashes[(i / kColours.size() + i) % kDashes.size()];
        std::string points;
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (!points.empty()) points += ' ';
            points += num(px(x)) + "," + num(py(y));
        }
        std::string style = std::string("fill=\"none\" stroke=\"") + colour + "\" stroke-width=\"2\"";
        if (std::string_view(dash) != "none") style += std::string(" stroke-dasharray=\"") + dash + "\"";
        svg += "<polyline class=\"series\" " + style + " points=\"" + points + "\"/>\n";

        const double ly = kTop + 10 + 20.0 * static_cast<double>(i);
        const double lx = kLeft + pw + 15;
        svg += "<g class=\"legend\"><line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 30) +
               "\" y2=\"" + num(ly) + "\" " + style + "/><text x=\"" + num(lx + 36) + "\" y=\"" + num(ly + 4) +
               "\" font-size=\"12\">" + escape(s.label) + "</text></g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void write_svg(const std::string& path, const Chart& chart) { write_text_file(path, render_svg(chart)); }

}  // namespace pdsc::harness
