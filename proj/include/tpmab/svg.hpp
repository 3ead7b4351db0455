#pragma once

#include <string>
#include <vector>

namespace tpmab {

// Self-contained SVG emission; output references no external resources.

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> band;  // half-width around y; empty = no band
  bool dashed = false;
};

struct SvgOptions {
  int width = 960;
  int height = 600;
  bool log_x = false;
  std::string title;
  std::string x_label = "t";
  std::string y_label = "cumulative regret";
};

std::string render_line_chart(const std::vector<SvgSeries>& series, const SvgOptions& opt);

std::string render_bar_chart(const std::vector<double>& values, const std::string& title,
                             const std::string& x_label, const std::string& y_label);

}  // namespace tpmab
