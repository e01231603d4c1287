#pragma once

#include <string>
#include <vector>

namespace memsim {

struct SvgSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgPanel {
    std::string y_label;
    std::vector<SvgSeries> series;
};

/// Standalone SVG document: one axes box per panel stacked vertically,
/// tick labels, one polyline per series, legend from series names. No
/// external assets; output is byte-deterministic for equal input.
/// Throws std::invalid_argument on empty data.
std::string render_svg(const std::vector<SvgPanel>& panels, const std::string& x_label);

} // namespace memsim
