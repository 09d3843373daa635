#include "qaeval/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qaeval {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 540.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 190.0; // legend column
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

std::string render_edc_svg(const std::vector<NamedCurve>& curves, double starting_error,
                           const std::string& title) {
    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;

    double y_max = std::max(starting_error, 1e-6);
    for (const NamedCurve& nc : curves) {
        for (const EdcPoint& p : nc.curve.points) {
            y_max = std::max(y_max, p.error);
        }
    }
    y_max = std::min(1.0, y_max * 1.08);

    auto sx = [&](double x) { return kMarginLeft + x * plot_w; };
    auto sy = [&](double y) { return kMarginTop + (1.0 - y / y_max) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kMarginLeft << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">"
        << title << "</text>\n";

    // Axes and grid.
    svg << "<g stroke=\"#cccccc\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 10; ++i) {
        const double x = static_cast<double>(i) / 10.0;
        svg << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(sy(0)) << "\" x2=\"" << num(sx(x))
            << "\" y2=\"" << num(sy(y_max)) << "\"/>\n";
        svg << "<text x=\"" << num(sx(x) - 8) << "\" y=\"" << num(sy(0) + 16)
            << "\" stroke=\"none\" fill=\"black\">" << num(x) << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double y = y_max * static_cast<double>(i) / 5.0;
        svg << "<line x1=\"" << num(sx(0)) << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << num(sx(1))
            << "\" y2=\"" << num(sy(y)) << "\"/>\n";
        svg << "<text x=\"" << num(sx(0) - 46) << "\" y=\"" << num(sy(y) + 4)
            << "\" stroke=\"none\" fill=\"black\">" << num(y) << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<text x=\"" << num(sx(0.5) - 60) << "\" y=\"" << num(kHeight - 12)
        << "\" font-family=\"sans-serif\" font-size=\"13\">discard fraction</text>\n";
    svg << "<text x=\"16\" y=\"" << num(sy(y_max / 2)) << "\" font-family=\"sans-serif\" "
        << "font-size=\"13\" transform=\"rotate(-90 16 " << num(sy(y_max / 2))
        << ")\">error</text>\n";

    // Constant starting-error line (soft upper bound).
    svg << "<line x1=\"" << num(sx(0)) << "\" y1=\"" << num(sy(starting_error)) << "\" x2=\""
        << num(sx(1)) << "\" y2=\"" << num(sy(starting_error))
        << "\" stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"2,4\"/>\n";
    // Theoretical best max(0, E0 - x): down to the kink, then along zero.
    svg << "<path d=\"M " << num(sx(0)) << " " << num(sy(starting_error)) << " L "
        << num(sx(std::min(1.0, starting_error))) << " " << num(sy(0)) << " L " << num(sx(1)) << " "
        << num(sy(0)) << "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\" "
        << "stroke-dasharray=\"6,4\"/>\n";

    // Step curves: horizontal-then-vertical segments only; the last step
    // extends to the right edge.
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& points = curves[c].curve.points;
        if (points.empty()) {
            continue;
        }
        std::ostringstream path;
        path << "M " << num(sx(points[0].discard_fraction)) << " " << num(sy(points[0].error));
        for (std::size_t i = 1; i < points.size(); ++i) {
            path << " H " << num(sx(points[i].discard_fraction));
            path << " V " << num(sy(points[i].error));
        }
        path << " H " << num(sx(1.0));
        const char* colour = kPalette[c % (sizeof kPalette / sizeof kPalette[0])];
        svg << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << colour
            << "\" stroke-width=\"1.6\"/>\n";
    }

    // Legend.
    const double legend_x = kWidth - kMarginRight + 14.0;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const double y = kMarginTop + 14.0 + 18.0 * static_cast<double>(c);
        const char* colour = kPalette[c % (sizeof kPalette / sizeof kPalette[0])];
        svg << "<line x1=\"" << num(legend_x) << "\" y1=\"" << num(y - 4) << "\" x2=\""
            << num(legend_x + 22) << "\" y2=\"" << num(y - 4) << "\" stroke=\"" << colour
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << num(legend_x + 28) << "\" y=\"" << num(y)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << curves[c].algorithm
            << "</text>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

} // namespace qaeval
