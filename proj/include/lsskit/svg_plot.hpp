#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lss {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Self-contained log-log SVG scatter/line plot with dashed reference-slope
/// guide lines. Output is a pure function of the inputs (no timestamps), so
/// plots are golden-file comparable. Non-positive points are skipped.
void write_loglog_svg(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<PlotSeries>& series,
                      const std::vector<double>& guide_slopes, std::ostream& out);

}  // namespace lss
