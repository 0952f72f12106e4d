#pragma once

#include <string>
#include <vector>

#include "cdasim/stats/facts.hpp"

namespace cdasim::stats {

enum class Style { line, stem, points };

struct Line {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  Style style = Style::line;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Line> lines;
  std::vector<double> reference_y;  // dashed horizontal guides, e.g. a confidence band
  bool log_y = false;
};

// Self-contained SVG document; identical input gives identical bytes.
std::string render_svg(const Plot& plot);

// Normalized histogram as (bin centre, density) points.
Line density(const std::string& label, const std::vector<double>& values, std::size_t bins);

struct Panel {
  std::string name;  // file stem, e.g. "fact_a_heavy_tails"
  std::string svg;
};

// The six stylized-fact panels for one validated series.
std::vector<Panel> fact_panels(const RunReport& report, const FactThresholds& th = {});

}  // namespace cdasim::stats
