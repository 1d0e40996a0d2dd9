#pragma once

#include <string>
#include <vector>

namespace librot::io {

/// One polyline of an SVG quick-look plot.
struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Write a minimal self-contained SVG line plot (linear axes). Non-finite
/// points break the polyline. Intended for quick inspection only; CSV output
/// remains the data contract.
void write_svg_lines(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series);

}  // namespace librot::io
