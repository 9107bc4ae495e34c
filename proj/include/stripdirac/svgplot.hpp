#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stripdirac/common.hpp"

namespace sd {

struct SvgSeries {
  std::string label;
  Vec x;
  Vec y;
};

/// Horizontal band [ylo, yhi] drawn behind the curves (e.g. the spectral
/// gap between the essential-spectrum edges).
struct SvgBand {
  double ylo = 0.0;
  double yhi = 0.0;
  std::string label;
};

/// Minimal deterministic SVG line chart: fixed layout, fixed palette,
/// fixed number formatting, so identical inputs render byte-identically.
std::string render_line_chart(const std::string& title,
                              const std::string& xlabel,
                              const std::string& ylabel,
                              const std::vector<SvgSeries>& series,
                              const std::optional<SvgBand>& band = {});

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<SvgSeries>& series,
                      const std::optional<SvgBand>& band = {});

}  // namespace sd
