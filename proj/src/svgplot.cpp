#include "stripdirac/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace sd {

namespace {

constexpr int kWidth = 760;
constexpr int kHeight = 480;
constexpr int kLeft = 70, kRight = 20, kTop = 42, kBottom = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string esc(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return std::string(buf);
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void absorb(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = -1.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-300) {
      const double pad = std::max(1.0, std::abs(hi));
      lo -= pad;
      hi += pad;
    } else {
      const double pad = 0.05 * (hi - lo);
      lo -= pad;
      hi += pad;
    }
  }
};

}  // namespace

std::string render_line_chart(const std::string& title,
                              const std::string& xlabel,
                              const std::string& ylabel,
                              const std::vector<SvgSeries>& series,
                              const std::optional<SvgBand>& band) {
  Range rx, ry;
  for (const SvgSeries& s : series) {
    for (int i = 0; i < s.x.size(); ++i) rx.absorb(s.x[i]);
    for (int i = 0; i < s.y.size(); ++i) ry.absorb(s.y[i]);
  }
  if (band) {
    ry.absorb(band->ylo);
    ry.absorb(band->yhi);
  }
  rx.finish();
  ry.finish();

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double y) {
    return kTop + (ry.hi - y) / (ry.hi - ry.lo) * ph;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << kWidth << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth
      << " " << kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" fill=\"#ffffff\"/>\n";

  if (band) {
    double y0 = py(band->yhi), y1 = py(band->ylo);
    svg << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(y0) << "\" width=\""
        << fmt(pw) << "\" height=\"" << fmt(std::max(y1 - y0, 1.0))
        << "\" fill=\"#fcecc0\"/>\n";
    if (!band->label.empty())
      svg << "<text x=\"" << fmt(kLeft + 8.0) << "\" y=\""
          << fmt(0.5 * (y0 + y1) + 4.0)
          << "\" font-family=\"sans-serif\" font-size=\"12\" "
             "fill=\"#8a6d1a\">"
          << esc(band->label) << "</text>\n";
  }

  // Axes frame and ticks.
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double fx = rx.lo + (rx.hi - rx.lo) * i / nticks;
    const double fy = ry.lo + (ry.hi - ry.lo) * i / nticks;
    const double xp = px(fx), yp = py(fy);
    svg << "<line x1=\"" << fmt(xp) << "\" y1=\"" << fmt(kTop + ph)
        << "\" x2=\"" << fmt(xp) << "\" y2=\"" << fmt(kTop + ph + 5.0)
        << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << fmt(xp) << "\" y=\"" << fmt(kTop + ph + 18.0)
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">"
        << fmt(fx, "%.4g") << "</text>\n"
        << "<line x1=\"" << fmt(kLeft - 5.0) << "\" y1=\"" << fmt(yp)
        << "\" x2=\"" << fmt(kLeft) << "\" y2=\"" << fmt(yp)
        << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << fmt(kLeft - 8.0) << "\" y=\"" << fmt(yp + 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">"
        << fmt(fy, "%.4g") << "</text>\n";
  }

  // Zero line if it lies inside the frame.
  if (ry.lo < 0.0 && ry.hi > 0.0)
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(py(0.0)) << "\" x2=\""
        << fmt(kLeft + pw) << "\" y2=\"" << fmt(py(0.0))
        << "\" stroke=\"#bbbbbb\" stroke-width=\"1\" "
           "stroke-dasharray=\"4,3\"/>\n";

  for (size_t k = 0; k < series.size(); ++k) {
    const SvgSeries& s = series[k];
    const char* color = kPalette[k % kPaletteSize];
    std::ostringstream pts;
    for (int i = 0; i < std::min<int>(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      pts << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    // Legend entry.
    const double ly = kTop + 16.0 + 16.0 * static_cast<double>(k);
    svg << "<line x1=\"" << fmt(kLeft + pw - 150.0) << "\" y1=\"" << fmt(ly)
        << "\" x2=\"" << fmt(kLeft + pw - 126.0) << "\" y2=\"" << fmt(ly)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << fmt(kLeft + pw - 120.0) << "\" y=\""
        << fmt(ly + 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << esc(s.label)
        << "</text>\n";
  }

  svg << "<text x=\"" << fmt(kLeft + pw / 2.0) << "\" y=\"" << fmt(kTop - 14.0)
      << "\" font-family=\"sans-serif\" font-size=\"15\" "
         "text-anchor=\"middle\">"
      << esc(title) << "</text>\n"
      << "<text x=\"" << fmt(kLeft + pw / 2.0) << "\" y=\""
      << fmt(kHeight - 14.0)
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">"
      << esc(xlabel) << "</text>\n"
      << "<text x=\"18\" y=\"" << fmt(kTop + ph / 2.0)
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fmt(kTop + ph / 2.0) << ")\">"
      << esc(ylabel) << "</text>\n"
      << "</svg>\n";
  return svg.str();
}

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<SvgSeries>& series,
                      const std::optional<SvgBand>& band) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("svg: cannot write \"" + path + "\"");
  out << render_line_chart(title, xlabel, ylabel, series, band);
}

}  // namespace sd
