#include "sircontrol/svg.hpp"

#include "sircontrol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace sir::svg {

namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (lo > hi) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double margin = 0.04 * (hi - lo);
        lo -= margin;
        hi += margin;
    }
};

// Tick spacing 1/2/5 * 10^k, aiming for about five intervals.
double nice_tick(double span) {
    const double rough = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(rough)));
    const double frac = rough / mag;
    if (frac < 1.5) return mag;
    if (frac < 3.5) return 2.0 * mag;
    if (frac < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

void write(const std::filesystem::path& file, const std::vector<Panel>& panels, int width,
           int panel_height) {
    std::ofstream out(file);
    if (!out) throw Error("cannot open '" + file.string() + "' for writing");

    const double margin_l = 64, margin_r = 14, margin_t = 30, margin_b = 44;
    const double total_h = static_cast<double>(panel_height) * panels.size();
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << total_h << "\" font-family=\"Helvetica,Arial,sans-serif\" font-size=\"11\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const Panel& panel = panels[pi];
        const double top = static_cast<double>(panel_height) * pi + margin_t;
        const double bottom = static_cast<double>(panel_height) * (pi + 1) - margin_b;
        const double left = margin_l;
        const double right = width - margin_r;

        Range xr, yr;
        for (const Series& s : panel.series)
            for (const auto& [x, y] : s.points) {
                xr.add(x);
                yr.add(y);
            }
        for (double h : panel.h_lines) yr.add(h);
        if (panel.y_min) yr.add(*panel.y_min);
        if (panel.y_max) yr.add(*panel.y_max);
        xr.pad();
        yr.pad();

        auto sx = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * (right - left); };
        auto sy = [&](double y) { return bottom - (y - yr.lo) / (yr.hi - yr.lo) * (bottom - top); };

        // frame and ticks
        out << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\""
            << px(right - left) << "\" height=\"" << px(bottom - top)
            << "\" fill=\"none\" stroke=\"#444\"/>\n";
        const double xt = nice_tick(xr.hi - xr.lo);
        for (double x = std::ceil(xr.lo / xt) * xt; x <= xr.hi + 1e-9 * xt; x += xt) {
            out << "<line x1=\"" << px(sx(x)) << "\" y1=\"" << px(bottom) << "\" x2=\"" << px(sx(x))
                << "\" y2=\"" << px(bottom + 4) << "\" stroke=\"#444\"/>\n";
            out << "<line x1=\"" << px(sx(x)) << "\" y1=\"" << px(top) << "\" x2=\"" << px(sx(x))
                << "\" y2=\"" << px(bottom) << "\" stroke=\"#eee\"/>\n";
            out << "<text x=\"" << px(sx(x)) << "\" y=\"" << px(bottom + 16)
                << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
        }
        const double yt = nice_tick(yr.hi - yr.lo);
        for (double y = std::ceil(yr.lo / yt) * yt; y <= yr.hi + 1e-9 * yt; y += yt) {
            out << "<line x1=\"" << px(left - 4) << "\" y1=\"" << px(sy(y)) << "\" x2=\""
                << px(left) << "\" y2=\"" << px(sy(y)) << "\" stroke=\"#444\"/>\n";
            out << "<line x1=\"" << px(left) << "\" y1=\"" << px(sy(y)) << "\" x2=\"" << px(right)
                << "\" y2=\"" << px(sy(y)) << "\" stroke=\"#eee\"/>\n";
            out << "<text x=\"" << px(left - 7) << "\" y=\"" << px(sy(y) + 3)
                << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
        }

        for (double h : panel.h_lines)
            out << "<line x1=\"" << px(left) << "\" y1=\"" << px(sy(h)) << "\" x2=\"" << px(right)
                << "\" y2=\"" << px(sy(h))
                << "\" stroke=\"#888\" stroke-dasharray=\"5,4\"/>\n";

        for (const Series& s : panel.series) {
            if (s.points.empty()) continue;
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\" points=\"";
            for (const auto& [x, y] : s.points) out << px(sx(x)) << ',' << px(sy(y)) << ' ';
            out << "\"/>\n";
        }

        // legend, title, axis labels
        double ly = top + 14;
        for (const Series& s : panel.series) {
            if (s.label.empty()) continue;
            out << "<line x1=\"" << px(right - 150) << "\" y1=\"" << px(ly - 4) << "\" x2=\""
                << px(right - 126) << "\" y2=\"" << px(ly - 4) << "\" stroke=\"" << s.color
                << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << px(right - 120) << "\" y=\"" << px(ly) << "\">" << s.label
                << "</text>\n";
            ly += 15;
        }
        out << "<text x=\"" << px(0.5 * (left + right)) << "\" y=\"" << px(top - 9)
            << "\" text-anchor=\"middle\" font-size=\"13\">" << panel.title << "</text>\n";
        out << "<text x=\"" << px(0.5 * (left + right)) << "\" y=\"" << px(bottom + 32)
            << "\" text-anchor=\"middle\">" << panel.x_label << "</text>\n";
        out << "<text x=\"14\" y=\"" << px(0.5 * (top + bottom))
            << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << px(0.5 * (top + bottom))
            << ")\">" << panel.y_label << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace sir::svg
