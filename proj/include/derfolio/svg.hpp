#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace derfolio::svg {

/// A point in (risk, expected return) space, both as fractions.
struct RiskReturn {
  double risk = 0.0;
  double ret = 0.0;
};

struct FrontierSeries {
  std::string label;
  std::vector<RiskReturn> points;
  std::optional<RiskReturn> mvp;
  std::optional<RiskReturn> max_sharpe;
};

/**
 * Self-contained 800x600 SVG chart: risk on the horizontal axis, expected
 * return on the vertical axis, both labelled in percent with 10 tick
 * intervals. Each series is a polyline with point markers; the MVP is a
 * filled square and the max-Sharpe portfolio a filled triangle. A legend
 * lists series in input order. Output is deterministic.
 */
std::string render_frontiers(std::span<const FrontierSeries> series, const std::string& title,
                             const std::string& subtitle);

std::string xml_escape(std::string_view s);

}  // namespace derfolio::svg
