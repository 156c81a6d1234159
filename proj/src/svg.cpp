#include "purcell/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "purcell/errors.hpp"

namespace purcell {

namespace {

constexpr std::array<const char*, 6> kColors = {"#2ca02c", "#1f77b4", "#d62728",
                                                "#c020c0", "#ff7f0e", "#7f7f7f"};

struct Axis {
    double lo;
    double hi;
    bool log;

    [[nodiscard]] double unit(double v) const {
        return log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                   : (v - lo) / (hi - lo);
    }

    [[nodiscard]] bool accepts(double v) const { return std::isfinite(v) && (!log || v > 0.0); }

    [[nodiscard]] std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi)); e += 1.0) {
                const double v = std::pow(10.0, e);
                if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9)) out.push_back(v);
            }
        } else {
            for (int i = 0; i <= 5; ++i) out.push_back(lo + (hi - lo) * i / 5.0);
        }
        return out;
    }
};

Axis fit_axis(const std::vector<double>& values, bool log) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : values) {
        if (!std::isfinite(v) || (log && v <= 0.0)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!std::isfinite(lo)) return {1.0, 10.0, log};
    if (hi <= lo) {
        if (log) {
            lo /= 2.0;
            hi *= 2.0;
        } else {
            lo -= 0.5;
            hi += 0.5;
        }
    }
    return {lo, hi, log};
}

std::string label(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3g", v);
    return buffer;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const SweepTable& table, const PlotOptions& options) {
    table.validate();
    const double left = 70, right = 20, top = 40, bottom = 55;
    const double plot_w = options.width - left - right;
    const double plot_h = options.height - top - bottom;

    const Axis x = fit_axis(table.axis_values, options.log_x);
    std::vector<double> all_y;
    for (const Series& s : table.series) all_y.insert(all_y.end(), s.values.begin(), s.values.end());
    const Axis y = fit_axis(all_y, options.log_y);

    const auto px = [&](double v) { return left + plot_w * x.unit(v); };
    const auto py = [&](double v) { return top + plot_h * (1.0 - y.unit(v)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
        << options.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << options.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(options.title) << "</text>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : x.ticks()) {
        svg << "<line x1=\"" << px(t) << "\" y1=\"" << top + plot_h << "\" x2=\"" << px(t)
            << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"black\"/>"
            << "<text x=\"" << px(t) << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\">" << label(t) << "</text>\n";
    }
    for (double t : y.ticks()) {
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << left
            << "\" y2=\"" << py(t) << "\" stroke=\"black\"/>"
            << "<text x=\"" << left - 8 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">"
            << label(t) << "</text>\n";
    }
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << options.height - 12
        << "\" text-anchor=\"middle\">" << escape(options.x_label) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << top + plot_h / 2 << ")\">" << escape(options.y_label) << "</text>\n";

    for (std::size_t k = 0; k < table.series.size(); ++k) {
        const Series& s = table.series[k];
        const char* color = kColors[k % kColors.size()];
        const bool dashed = s.label.rfind("asymptote", 0) == 0;
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
            << (dashed ? " stroke-dasharray=\"6 3 1 3\"" : "") << " points=\"";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const double xv = table.axis_values[i];
            const double yv = s.values[i];
            if (!x.accepts(xv) || !y.accepts(yv) || yv < y.lo || yv > y.hi) continue;
            svg << px(xv) << ',' << py(yv) << ' ';
        }
        svg << "\"/>\n";
        const double ly = top + 16 + 16.0 * static_cast<double>(k);
        svg << "<line x1=\"" << left + plot_w - 150 << "\" y1=\"" << ly - 4 << "\" x2=\""
            << left + plot_w - 125 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"" << (dashed ? " stroke-dasharray=\"6 3 1 3\"" : "")
            << "/><text x=\"" << left + plot_w - 120 << "\" y=\"" << ly << "\">" << escape(s.label)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace purcell
