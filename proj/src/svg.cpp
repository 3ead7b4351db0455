#include "tpmab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tpmab {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
                          "#aec7e8", "#98df8a"};
constexpr int kPaletteSize = 12;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Tick positions on a 1-2-5 progression covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
  if (!(hi > lo)) return {lo};
  double span = hi - lo;
  double step = std::pow(10.0, std::floor(std::log10(span / 5.0)));
  for (double m : {2.0, 2.5, 2.0}) {
    if (span / step <= 8.0) break;
    step *= m;
  }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step)
    ticks.push_back(v);
  return ticks;
}

std::vector<double> decade_ticks(double lo, double hi) {
  std::vector<double> ticks;
  for (double d = std::pow(10.0, std::floor(std::log10(lo))); d <= hi * 1.0001; d *= 10.0)
    if (d >= lo * 0.9999) ticks.push_back(d);
  if (ticks.empty()) return {lo, hi};
  return ticks;
}

}  // namespace

std::string render_line_chart(const std::vector<SvgSeries>& series, const SvgOptions& opt) {
  if (series.empty()) throw std::invalid_argument("render_line_chart: no series");
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = 0.0, y_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    if (s.x.size() != s.y.size() || (!s.band.empty() && s.band.size() != s.y.size()))
      throw std::invalid_argument("render_line_chart: mismatched series lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (opt.log_x && s.x[i] <= 0.0) continue;
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      double hw = s.band.empty() ? 0.0 : s.band[i];
      y_max = std::max(y_max, s.y[i] + hw);
      y_min = std::min(y_min, s.y[i] - hw);
    }
  }
  if (!(x_max > x_min)) x_max = x_min + 1.0;
  if (!(y_max > y_min)) y_max = y_min + 1.0;
  y_max *= 1.04;

  const double ml = 86, mr = 24, mt = opt.title.empty() ? 24 : 48, mb = 56;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;

  auto sx = [&](double x) {
    double f = opt.log_x ? (std::log(x) - std::log(x_min)) / (std::log(x_max) - std::log(x_min))
                         : (x - x_min) / (x_max - x_min);
    return ml + f * pw;
  };
  auto sy = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width
      << "\" height=\"" << opt.height << "\" viewBox=\"0 0 " << opt.width << ' '
      << opt.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    out << "<text x=\"" << opt.width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(opt.title)
        << "</text>\n";

  // grid and ticks
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  auto xticks = opt.log_x ? decade_ticks(x_min, x_max) : linear_ticks(x_min, x_max);
  for (double v : xticks) {
    double px = sx(v);
    out << "<line x1=\"" << num(px) << "\" y1=\"" << num(mt) << "\" x2=\"" << num(px)
        << "\" y2=\"" << num(mt + ph) << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << num(px) << "\" y=\"" << num(mt + ph + 16)
        << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
  }
  for (double v : linear_ticks(y_min, y_max)) {
    double py = sy(v);
    out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(py) << "\" x2=\"" << num(ml + pw)
        << "\" y2=\"" << num(py) << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(py + 4)
        << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(opt.height - 12)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(opt.x_label)
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << num(mt + ph / 2)
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << num(mt + ph / 2) << ")\">" << xml_escape(opt.y_label) << "</text>\n";
  out << "</g>\n";

  // axes
  out << "<path d=\"M " << num(ml) << ' ' << num(mt) << " L " << num(ml) << ' '
      << num(mt + ph) << " L " << num(ml + pw) << ' ' << num(mt + ph)
      << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1.2\"/>\n";

  int color_idx = 0;
  for (const auto& s : series) {
    const char* color = kPalette[color_idx % kPaletteSize];
    ++color_idx;
    std::vector<std::size_t> pts;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (!opt.log_x || s.x[i] > 0.0) pts.push_back(i);
    if (pts.empty()) continue;

    if (!s.band.empty()) {
      out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
      for (auto i : pts) out << num(sx(s.x[i])) << ',' << num(sy(s.y[i] + s.band[i])) << ' ';
      for (auto it = pts.rbegin(); it != pts.rend(); ++it)
        out << num(sx(s.x[*it])) << ',' << num(sy(s.y[*it] - s.band[*it])) << ' ';
      out << "\"/>\n";
    }
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
    if (s.dashed) out << " stroke-dasharray=\"7 4\"";
    out << " points=\"";
    for (auto i : pts) out << num(sx(s.x[i])) << ',' << num(sy(s.y[i])) << ' ';
    out << "\"/>\n";
  }

  // legend
  double ly = mt + 10;
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  color_idx = 0;
  for (const auto& s : series) {
    const char* color = kPalette[color_idx % kPaletteSize];
    ++color_idx;
    out << "<line x1=\"" << num(ml + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(ml + 40) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"7 4\"" : "")
        << "/>\n";
    out << "<text x=\"" << num(ml + 46) << "\" y=\"" << num(ly + 4) << "\">"
        << xml_escape(s.label) << "</text>\n";
    ly += 17;
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string render_bar_chart(const std::vector<double>& values, const std::string& title,
                             const std::string& x_label, const std::string& y_label) {
  if (values.empty()) throw std::invalid_argument("render_bar_chart: no values");
  const int width = 960, height = 480;
  const double ml = 70, mr = 20, mt = title.empty() ? 20 : 46, mb = 52;
  const double pw = width - ml - mr, ph = height - mt - mb;
  const double y_max = std::max(*std::max_element(values.begin(), values.end()), 1e-12) * 1.05;
  const double bw = pw / values.size();

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    out << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << xml_escape(title) << "</text>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double v : linear_ticks(0.0, y_max)) {
    double py = mt + ph - v / y_max * ph;
    out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(py) << "\" x2=\"" << num(ml + pw)
        << "\" y2=\"" << num(py) << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(py + 4)
        << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  const int label_stride = std::max<int>(1, static_cast<int>(values.size()) / 25);
  for (std::size_t k = 0; k < values.size(); ++k) {
    double px = ml + (k + 0.5) * bw;
    if (k % label_stride == 0)
      out << "<text x=\"" << num(px) << "\" y=\"" << num(mt + ph + 16)
          << "\" text-anchor=\"middle\">" << k + 1 << "</text>\n";
  }
  out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(height - 10)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << num(mt + ph / 2)
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << num(mt + ph / 2) << ")\">" << xml_escape(y_label) << "</text>\n";
  out << "</g>\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    double h = values[k] / y_max * ph;
    out << "<rect x=\"" << num(ml + k * bw + bw * 0.12) << "\" y=\"" << num(mt + ph - h)
        << "\" width=\"" << num(bw * 0.76) << "\" height=\"" << num(h)
        << "\" fill=\"#1f77b4\"/>\n";
  }
  out << "<path d=\"M " << num(ml) << ' ' << num(mt) << " L " << num(ml) << ' '
      << num(mt + ph) << " L " << num(ml + pw) << ' ' << num(mt + ph)
      << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1.2\"/>\n</svg>\n";
  return out.str();
}

}  // namespace tpmab
