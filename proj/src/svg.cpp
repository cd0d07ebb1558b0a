#include "derfolio/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace derfolio::svg {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 770.0;
constexpr double kTop = 80.0;
constexpr double kBottom = 520.0;
constexpr int kTicks = 10;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  // avoid "-0.00"
  if (std::string_view(buf) == "-0.00") return "0.00";
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded(double lo, double hi) {
  if (!(lo < hi)) {
    const double pad = std::max(std::abs(lo) * 0.05, 1e-4);
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

std::string percent_label(double fraction, double step_fraction) {
  const double step_pct = step_fraction * 100.0;
  int decimals = 0;
  if (step_pct > 0.0) decimals = std::clamp(static_cast<int>(std::ceil(-std::log10(step_pct))) + 1, 0, 6);
  char buf[48];
  double v = fraction * 100.0;
  if (std::abs(v) < 0.5 * std::pow(10.0, -decimals)) v = 0.0;
  std::snprintf(buf, sizeof(buf), "%.*f%%", decimals, v);
  return buf;
}

}  // namespace

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c; break;
    }
  }
  return out;
}

std::string render_frontiers(std::span<const FrontierSeries> series, const std::string& title,
                             const std::string& subtitle) {
  double xlo = std::numeric_limits<double>::infinity();
  double xhi = -xlo;
  double ylo = xlo;
  double yhi = -xlo;
  auto extend = [&](const RiskReturn& p) {
    xlo = std::min(xlo, p.risk);
    xhi = std::max(xhi, p.risk);
    ylo = std::min(ylo, p.ret);
    yhi = std::max(yhi, p.ret);
  };
  for (const auto& s : series) {
    for (const auto& p : s.points) extend(p);
    if (s.mvp) extend(*s.mvp);
    if (s.max_sharpe) extend(*s.max_sharpe);
  }
  if (!std::isfinite(xlo)) {
    xlo = ylo = 0.0;
    xhi = yhi = 0.0;
  }
  const Range xr = padded(xlo, xhi);
  const Range yr = padded(ylo, yhi);
  auto px = [&](double risk) { return kLeft + (risk - xr.lo) / (xr.hi - xr.lo) * (kRight - kLeft); };
  auto py = [&](double ret) { return kBottom - (ret - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" width=\""
     << kWidth << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">" << xml_escape(title)
     << "</text>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"54\" text-anchor=\"middle\" font-size=\"12\" fill=\"#555\">"
     << xml_escape(subtitle) << "</text>\n";

  // axes and grid
  os << "<g class=\"axes\" stroke=\"#000\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kBottom) << "\" x2=\"" << num(kRight) << "\" y2=\""
     << num(kBottom) << "\"/>\n";
  os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
     << num(kBottom) << "\"/>\n";
  os << "</g>\n";
  os << "<g class=\"ticks\" font-size=\"11\">\n";
  const double xstep = (xr.hi - xr.lo) / kTicks;
  const double ystep = (yr.hi - yr.lo) / kTicks;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = xr.lo + xstep * i;
    const double x = px(xv);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(kBottom) << "\" x2=\"" << num(x) << "\" y2=\""
       << num(kBottom + 5) << "\" stroke=\"#000\"/>";
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x) << "\" y2=\"" << num(kBottom)
       << "\" stroke=\"#eee\"/>";
    os << "<text x=\"" << num(x) << "\" y=\"" << num(kBottom + 20) << "\" text-anchor=\"middle\">"
       << percent_label(xv, xstep) << "</text>\n";

    const double yv = yr.lo + ystep * i;
    const double y = py(yv);
    os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kLeft) << "\" y2=\""
       << num(y) << "\" stroke=\"#000\"/>";
    os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kRight) << "\" y2=\"" << num(y)
       << "\" stroke=\"#eee\"/>";
    os << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
       << percent_label(yv, ystep) << "</text>\n";
  }
  os << "</g>\n";
  os << "<text x=\"" << num((kLeft + kRight) / 2) << "\" y=\"" << num(kBottom + 45)
     << "\" text-anchor=\"middle\" font-size=\"13\">Risk: standard deviation of portfolio return (% per period)"
        "</text>\n";
  os << "<text x=\"20\" y=\"" << num((kTop + kBottom) / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
     << "transform=\"rotate(-90 20 " << num((kTop + kBottom) / 2)
     << ")\">Expected return (% per period)</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % kPalette.size()];
    os << "<g class=\"series\" data-label=\"" << xml_escape(s.label) << "\">\n";
    if (s.points.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (i) os << ' ';
        os << num(px(s.points[i].risk)) << ',' << num(py(s.points[i].ret));
      }
      os << "\"/>\n";
    }
    for (const auto& p : s.points) {
      os << "<circle cx=\"" << num(px(p.risk)) << "\" cy=\"" << num(py(p.ret)) << "\" r=\"2.5\" fill=\"" << color
         << "\"/>\n";
    }
    if (s.mvp) {
      const double x = px(s.mvp->risk);
      const double y = py(s.mvp->ret);
      os << "<rect class=\"mvp\" x=\"" << num(x - 5) << "\" y=\"" << num(y - 5)
         << "\" width=\"10\" height=\"10\" fill=\"" << color << "\" stroke=\"#000\"/>\n";
    }
    if (s.max_sharpe) {
      const double x = px(s.max_sharpe->risk);
      const double y = py(s.max_sharpe->ret);
      os << "<polygon class=\"max-sharpe\" points=\"" << num(x) << ',' << num(y - 7) << ' ' << num(x - 6) << ','
         << num(y + 5) << ' ' << num(x + 6) << ',' << num(y + 5) << "\" fill=\"" << color
         << "\" stroke=\"#000\"/>\n";
    }
    os << "</g>\n";
  }

  // legend, top-left of the plot area
  os << "<g class=\"legend\" font-size=\"12\">\n";
  double ly = kTop + 14;
  const double lx = kLeft + 12;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % kPalette.size()];
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 24) << "\" y2=\""
       << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
    os << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly) << "\">" << xml_escape(series[k].label)
       << "</text>\n";
    ly += 18;
  }
  os << "<rect x=\"" << num(lx + 7) << "\" y=\"" << num(ly - 9) << "\" width=\"10\" height=\"10\" fill=\"#777\" "
     << "stroke=\"#000\"/><text x=\"" << num(lx + 30) << "\" y=\"" << num(ly) << "\">Minimum variance</text>\n";
  ly += 18;
  os << "<polygon points=\"" << num(lx + 12) << ',' << num(ly - 11) << ' ' << num(lx + 6) << ',' << num(ly + 1)
     << ' ' << num(lx + 18) << ',' << num(ly + 1) << "\" fill=\"#777\" stroke=\"#000\"/><text x=\""
     << num(lx + 30) << "\" y=\"" << num(ly) << "\">Maximum Sharpe</text>\n";
  os << "</g>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace derfolio::svg
