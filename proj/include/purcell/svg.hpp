// svg.hpp - minimal line-plot rendering of sweep tables

#pragma once

#include <string>

#include "purcell/sweep.hpp"

namespace purcell {

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label{"R/R0"};
    bool log_x{true};
    bool log_y{true};
    int width{720};
    int height{480};
};

/// Standalone SVG document with axes, ticks, one polyline per series and a
/// legend. Non-positive values are skipped on log axes.
std::string render_svg(const SweepTable& table, const PlotOptions& options);

}  // namespace purcell
