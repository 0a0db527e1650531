#pragma once

#include <string>
#include <vector>

// Minimal self-contained SVG emission: line/scatter plots and rect-grid
// heatmaps with a fixed 256-step blue-to-red ramp. Derived artifacts only;
// CSV content never depends on these.

namespace dimerstate::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  ///< draw point markers as well as the polyline
};

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

/// `values` is row-major with the y index outer: values[yi * x.size() + xi].
void write_heatmap(const std::string& path, const std::string& title,
                   const std::string& x_label, const std::string& y_label,
                   const std::vector<double>& x_axis,
                   const std::vector<double>& y_axis,
                   const std::vector<double>& values);

}  // namespace dimerstate::svg
