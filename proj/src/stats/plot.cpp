#include "cdasim/stats/plot.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace cdasim::stats {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = INFINITY, hi = -INFINITY;
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (lo > hi) lo = 0, hi = 1;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  }
};

}  // namespace

std::string render_svg(const Plot& plot) {
  auto ty = [&](double v) { return plot.log_y ? (v > 0 ? std::log10(v) : NAN) : v; };
  Range xr, yr;
  for (const Line& l : plot.lines) {
    for (double v : l.x) xr.add(v);
    for (double v : l.y) yr.add(ty(v));
    if (l.style == Style::stem && !plot.log_y) yr.add(0.0);
  }
  for (double v : plot.reference_y) yr.add(ty(v));
  xr.finish();
  yr.finish();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double v) { return kTop + (1.0 - (ty(v) - yr.lo) / (yr.hi - yr.lo)) * ph; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{3}</text>\n",
      kWidth, kHeight, kWidth / 2, escape(plot.title));
  out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n", kLeft,
                     kTop, pw, ph);
  for (int i = 0; i <= 4; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.4g}</text>\n", sx(xv),
                       kHeight - kBottom + 16, xv);
    const double ypix = kTop + (1.0 - i / 4.0) * ph;
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", kLeft - 6, ypix + 4,
                       plot.log_y ? fmt::format("1e{:.2g}", yv) : fmt::format("{:.4g}", yv));
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2, kHeight - 10,
                     escape(plot.x_label));
  out += fmt::format("<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
                     kTop + ph / 2, escape(plot.y_label));
  for (double r : plot.reference_y) {
    if (!std::isfinite(ty(r))) continue;
    out += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#888\" stroke-dasharray=\"5,4\"/>\n",
        kLeft, sy(r), kLeft + pw, sy(r));
  }

  for (std::size_t i = 0; i < plot.lines.size(); ++i) {
    const Line& l = plot.lines[i];
    const char* color = kPalette[i % std::size(kPalette)];
    const std::size_t n = std::min(l.x.size(), l.y.size());
    if (l.style == Style::line) {
      std::string pts;
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(ty(l.y[j]))) continue;
        pts += fmt::format("{:.1f},{:.1f} ", sx(l.x[j]), sy(l.y[j]));
      }
      out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>\n", color, pts);
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(ty(l.y[j]))) continue;
        if (l.style == Style::stem)
          out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"{3}\"/>\n",
                             sx(l.x[j]), sy(0.0), sy(l.y[j]), color);
        out += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"2.2\" fill=\"{}\"/>\n", sx(l.x[j]), sy(l.y[j]),
                           color);
      }
    }
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" fill=\"{}\">{}</text>\n", kLeft + pw - 150,
                       kTop + 16 + 15.0 * static_cast<double>(i), color, escape(l.label));
  }
  out += "</svg>\n";
  return out;
}

Line density(const std::string& label, const std::vector<double>& values, std::size_t bins) {
  Line l{label, {}, {}, Style::points};
  if (values.empty() || bins == 0) return l;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn, hi = *mx > *mn ? *mx : *mn + 1.0;
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<double> counts(bins, 0.0);
  for (double v : values) counts[std::min(bins - 1, static_cast<std::size_t>((v - lo) / width))] += 1.0;
  for (std::size_t b = 0; b < bins; ++b) {
    l.x.push_back(lo + (static_cast<double>(b) + 0.5) * width);
    l.y.push_back(counts[b] / (static_cast<double>(values.size()) * width));
  }
  return l;
}

namespace {

Line acf_line(const std::string& label, const AcfResult& r, std::size_t max_lag, Style style) {
  Line l{label, {}, {}, style};
  for (std::size_t k = 1; k <= std::min(max_lag, r.max_lag()); ++k) {
    l.x.push_back(static_cast<double>(k));
    l.y.push_back(r.at(k));
  }
  return l;
}

std::vector<double> standardized(const std::vector<double>& v) {
  if (v.empty()) return v;
  double mean = 0.0, ss = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size()));
  std::vector<double> out;
  for (double x : v) out.push_back(sd > 0 ? (x - mean) / sd : 0.0);
  return out;
}

Line gaussian(const Line& like) {
  Line g{"N(0,1)", like.x, {}, Style::line};
  for (double x : like.x) g.y.push_back(std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI));
  return g;
}

}  // namespace

std::vector<Panel> fact_panels(const RunReport& r, const FactThresholds& th) {
  std::vector<Panel> out;
  if (r.inconclusive) {
    const std::string note = "inconclusive: " + *r.inconclusive;
    for (const char* name : {"fact_a_heavy_tails", "fact_b_return_acf", "fact_c_volatility_clustering",
                             "fact_d_nonlinear_acf", "fact_e_first_passage", "fact_f_aggregational_gaussianity"})
      out.push_back({name, render_svg(Plot{std::string(name) + " (" + note + ")", "", "", {}, {}, false})});
    return out;
  }
  const double band = r.return_acf.band;

  {
    Line d = density("standardized returns", standardized(r.returns), 60);
    Plot p{fmt::format("(a) heavy tails: excess kurtosis {:.3g}", r.excess_kurtosis), "standardized return",
           "density (log)", {d, gaussian(d)}, {}, true};
    out.push_back({"fact_a_heavy_tails", render_svg(p)});
  }
  {
    Plot p{"(b) autocorrelation of returns", "lag", "acf", {acf_line("r", r.return_acf, th.acf_lag_hi, Style::stem)},
           {band, -band}, false};
    out.push_back({"fact_b_return_acf", render_svg(p)});
  }
  {
    Plot p{"(c) volatility clustering", "lag", "acf",
           {acf_line("|r|", r.suite.front().acf, th.acf_lag_hi, Style::stem)}, {band, -band}, false};
    out.push_back({"fact_c_volatility_clustering", render_svg(p)});
  }
  {
    Plot p{"(d) autocorrelation of nonlinear transforms", "lag", "acf", {}, {band, -band}, false};
    for (const auto& s : r.suite) p.lines.push_back(acf_line(std::string(to_string(s.transform)), s.acf, th.acf_lag_hi, Style::line));
    out.push_back({"fact_d_nonlinear_acf", render_svg(p)});
  }
  {
    auto as_double = [](const std::vector<std::size_t>& v) { return std::vector<double>(v.begin(), v.end()); };
    Line g = density("gain", as_double(r.passage.gain), 40);
    Line l = density("loss", as_double(r.passage.loss), 40);
    g.style = l.style = Style::line;
    Plot p{fmt::format("(e) first passage times, rho = {:.3g}", r.passage.rho), "ticks", "density (log)", {g, l},
           {}, true};
    out.push_back({"fact_e_first_passage", render_svg(p)});
  }
  {
    Line fine = density("stride 1", standardized(r.returns), 50);
    Line coarse = density(fmt::format("stride {}", th.coarse_stride), standardized(r.coarse_returns), 50);
    fine.style = coarse.style = Style::line;
    Plot p{fmt::format("(f) aggregational gaussianity: kurtosis {:.3g} vs {:.3g}", r.kurtosis_fine, r.kurtosis_coarse),
           "standardized return", "density (log)", {fine, coarse, gaussian(fine)}, {}, true};
    out.push_back({"fact_f_aggregational_gaussianity", render_svg(p)});
  }
  return out;
}

}  // namespace cdasim::stats
