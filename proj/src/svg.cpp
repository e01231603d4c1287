#include "memsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace memsim {

namespace {

constexpr int kWidth = 800;
constexpr int kPanelHeight = 240;
constexpr int kMarginLeft = 80;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 28;
constexpr int kMarginBottom = 44;
constexpr std::size_t kMaxPointsPerSeries = 4000;

const char* kPalette[] = {"#2a7e3f", "#8e44ad", "#1f77b4", "#d62728", "#7f7f7f", "#bc8b00"};

std::string fmt(double v, const char* spec = "%.2f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string tick_label(double v) { return fmt(v, "%.4g"); }

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            const double eps = std::abs(lo) * 1e-3 + 1e-9;
            lo -= eps;
            hi += eps;
        }
    }
};

} // namespace

std::string render_svg(const std::vector<SvgPanel>& panels, const std::string& x_label) {
    if (panels.empty()) throw std::invalid_argument("render_svg: no panels");
    for (const auto& p : panels) {
        if (p.series.empty()) throw std::invalid_argument("render_svg: empty panel");
        for (const auto& s : p.series) {
            if (s.x.empty() || s.x.size() != s.y.size())
                throw std::invalid_argument("render_svg: empty or mismatched series");
        }
    }

    const int total_h = kPanelHeight * static_cast<int>(panels.size());
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
           "\" height=\"" + std::to_string(total_h) + "\" viewBox=\"0 0 " +
           std::to_string(kWidth) + " " + std::to_string(total_h) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const SvgPanel& panel = panels[pi];
        const double top = static_cast<double>(pi) * kPanelHeight + kMarginTop;
        const double bottom = static_cast<double>(pi + 1) * kPanelHeight - kMarginBottom;
        const double left = kMarginLeft;
        const double right = kWidth - kMarginRight;

        Range rx, ry;
        for (const auto& s : panel.series) {
            for (double v : s.x) rx.add(v);
            for (double v : s.y) ry.add(v);
        }
        rx.pad();
        ry.pad();

        auto px = [&](double v) { return left + (v - rx.lo) / (rx.hi - rx.lo) * (right - left); };
        auto py = [&](double v) {
            return bottom - (v - ry.lo) / (ry.hi - ry.lo) * (bottom - top);
        };

        out += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" +
               fmt(right - left) + "\" height=\"" + fmt(bottom - top) +
               "\" fill=\"none\" stroke=\"black\"/>\n";

        // Ticks: five per axis, linear.
        for (int k = 0; k <= 4; ++k) {
            const double fx = rx.lo + (rx.hi - rx.lo) * k / 4.0;
            const double fy = ry.lo + (ry.hi - ry.lo) * k / 4.0;
            out += "<line x1=\"" + fmt(px(fx)) + "\" y1=\"" + fmt(bottom) + "\" x2=\"" +
                   fmt(px(fx)) + "\" y2=\"" + fmt(bottom + 5) + "\" stroke=\"black\"/>\n";
            out += "<text x=\"" + fmt(px(fx)) + "\" y=\"" + fmt(bottom + 18) +
                   "\" font-size=\"11\" text-anchor=\"middle\">" + tick_label(fx) +
                   "</text>\n";
            out += "<line x1=\"" + fmt(left - 5) + "\" y1=\"" + fmt(py(fy)) + "\" x2=\"" +
                   fmt(left) + "\" y2=\"" + fmt(py(fy)) + "\" stroke=\"black\"/>\n";
            out += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(py(fy) + 4) +
                   "\" font-size=\"11\" text-anchor=\"end\">" + tick_label(fy) + "</text>\n";
        }
        if (!panel.y_label.empty())
            out += "<text x=\"" + fmt(left) + "\" y=\"" + fmt(top - 8) +
                   "\" font-size=\"12\">" + panel.y_label + "</text>\n";
        if (pi + 1 == panels.size() && !x_label.empty())
            out += "<text x=\"" + fmt((left + right) / 2) + "\" y=\"" +
                   fmt(bottom + 34) + "\" font-size=\"12\" text-anchor=\"middle\">" +
                   x_label + "</text>\n";

        for (std::size_t si = 0; si < panel.series.size(); ++si) {
            const SvgSeries& s = panel.series[si];
            const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
            const std::size_t stride =
                std::max<std::size_t>(1, s.x.size() / kMaxPointsPerSeries);
            out += "<polyline fill=\"none\" stroke=\"";
            out += color;
            out += "\" stroke-width=\"1.2\" points=\"";
            for (std::size_t k = 0; k < s.x.size(); k += stride)
                out += fmt(px(s.x[k])) + "," + fmt(py(s.y[k])) + " ";
            // Always include the final sample.
            out += fmt(px(s.x.back())) + "," + fmt(py(s.y.back()));
            out += "\"/>\n";
            out += "<text x=\"" + fmt(right - 6) + "\" y=\"" +
                   fmt(top + 14 + 14 * static_cast<double>(si)) +
                   "\" font-size=\"11\" text-anchor=\"end\" fill=\"";
            out += color;
            out += "\">" + s.name + "</text>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

} // namespace memsim
