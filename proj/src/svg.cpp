#include "dimerstate/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "dimerstate/errors.hpp"

namespace dimerstate::svg {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 72;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string num(double v, const char* fmt = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  double frac(double v) const { return (v - lo) / (hi - lo); }
};

std::ofstream open_svg(const std::string& path, int w, int h) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
      << "\">\n"
      << "<rect width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\"/>\n";
  return out;
}

void draw_frame(std::ofstream& out, const std::string& title,
                const std::string& x_label, const std::string& y_label,
                const Range& xr, const Range& yr, int plot_w, int plot_h) {
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop
      << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"24\" "
      << "text-anchor=\"middle\" font-size=\"15\" font-family=\"sans-serif\">"
      << title << "</text>\n";
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\""
      << kMarginTop + plot_h + 40
      << "\" text-anchor=\"middle\" font-size=\"13\" "
         "font-family=\"sans-serif\">"
      << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" "
         "font-family=\"sans-serif\" transform=\"rotate(-90 16 "
      << kMarginTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = i / 4.0;
    const double px = kMarginLeft + fx * plot_w;
    const double py = kMarginTop + plot_h - fx * plot_h;
    out << "<line x1=\"" << num(px) << "\" y1=\"" << kMarginTop + plot_h
        << "\" x2=\"" << num(px) << "\" y2=\"" << kMarginTop + plot_h + 5
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(px) << "\" y=\"" << kMarginTop + plot_h + 20
        << "\" text-anchor=\"middle\" font-size=\"11\" "
           "font-family=\"sans-serif\">"
        << num(xr.lo + fx * (xr.hi - xr.lo), "%.4g") << "</text>\n";
    out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << num(py)
        << "\" x2=\"" << kMarginLeft << "\" y2=\"" << num(py)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << num(py + 4)
        << "\" text-anchor=\"end\" font-size=\"11\" "
           "font-family=\"sans-serif\">"
        << num(yr.lo + fx * (yr.hi - yr.lo), "%.4g") << "</text>\n";
  }
}

/// 256-step blue-to-red ramp over t in [0, 1].
std::string ramp_color(double t) {
  int step = static_cast<int>(t * 256.0);
  step = std::clamp(step, 0, 255);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x00%02x", step, 255 - step);
  return buf;
}

}  // namespace

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series) {
  const int plot_w = kWidth - kMarginLeft - kMarginRight;
  const int plot_h = kHeight - kMarginTop - kMarginBottom;

  Range xr, yr;
  for (const auto& s : series) {
    for (double v : s.x) xr.include(v);
    for (double v : s.y) yr.include(v);
  }
  xr.pad();
  yr.pad();

  auto out = open_svg(path, kWidth, kHeight);
  draw_frame(out, title, x_label, y_label, xr, yr, plot_w, plot_h);

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % 4];
    if (s.x.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        out << num(kMarginLeft + xr.frac(s.x[i]) * plot_w) << ','
            << num(kMarginTop + plot_h - yr.frac(s.y[i]) * plot_h) << ' ';
      out << "\"/>\n";
    }
    if (s.markers || s.x.size() == 1) {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        out << "<circle cx=\"" << num(kMarginLeft + xr.frac(s.x[i]) * plot_w)
            << "\" cy=\""
            << num(kMarginTop + plot_h - yr.frac(s.y[i]) * plot_h)
            << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    if (!s.label.empty()) {
      const int ly = kMarginTop + 16 + 16 * static_cast<int>(si);
      out << "<rect x=\"" << kMarginLeft + 10 << "\" y=\"" << ly - 9
          << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n"
          << "<text x=\"" << kMarginLeft + 26 << "\" y=\"" << ly
          << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label
          << "</text>\n";
    }
  }
  out << "</svg>\n";
}

void write_heatmap(const std::string& path, const std::string& title,
                   const std::string& x_label, const std::string& y_label,
                   const std::vector<double>& x_axis,
                   const std::vector<double>& y_axis,
                   const std::vector<double>& values) {
  if (values.size() != x_axis.size() * y_axis.size())
    throw InputError("heatmap value count does not match the axes");
  const int plot_w = kWidth - kMarginLeft - kMarginRight;
  const int plot_h = kHeight - kMarginTop - kMarginBottom;

  Range xr, yr, vr;
  for (double v : x_axis) xr.include(v);
  for (double v : y_axis) yr.include(v);
  for (double v : values) vr.include(v);
  xr.pad();
  yr.pad();
  vr.pad();

  auto out = open_svg(path, kWidth, kHeight);
  const double cw = static_cast<double>(plot_w) / x_axis.size();
  const double ch = static_cast<double>(plot_h) / y_axis.size();
  for (std::size_t yi = 0; yi < y_axis.size(); ++yi) {
    for (std::size_t xi = 0; xi < x_axis.size(); ++xi) {
      const double t = vr.frac(values[yi * x_axis.size() + xi]);
      // Cell rows run bottom-up: low y at the bottom of the frame.
      out << "<rect x=\"" << num(kMarginLeft + xi * cw) << "\" y=\""
          << num(kMarginTop + plot_h - (yi + 1) * ch) << "\" width=\""
          << num(cw + 0.5) << "\" height=\"" << num(ch + 0.5) << "\" fill=\""
          << ramp_color(t) << "\"/>\n";
    }
  }
  draw_frame(out, title, x_label, y_label, xr, yr, plot_w, plot_h);
  out << "<text x=\"" << kWidth - kMarginRight << "\" y=\"24\" "
      << "text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
      << "range [" << num(vr.lo, "%.4g") << ", " << num(vr.hi, "%.4g")
      << "]</text>\n";
  out << "</svg>\n";
}

}  // namespace dimerstate::svg
