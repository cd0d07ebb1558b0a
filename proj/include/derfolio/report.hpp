#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "derfolio/core.hpp"
#include "derfolio/optimizer.hpp"
#include "derfolio/stats.hpp"

namespace derfolio {

struct AnalysisOptions {
  OptimizerConfig optimizer;
  /// mu is multiplied by this factor and sigma by it as well (risk by its root)
  double annualize = 1.0;
  /// per-asset transform; assets not listed use identity
  std::map<std::string, Transform> transforms;
};

/// Everything the frontier and compare reports print for one scenario.
struct ScenarioAnalysis {
  std::string name;
  AssetStats stats;
  Portfolio mvp;
  Portfolio max_sharpe;
  double sharpe = 0.0;
  std::vector<FrontierPoint> frontier;
};

/// Returns, alignment and (optionally annualised) statistics of a parsed scenario.
AssetStats scenario_stats(const Scenario& scenario, const AnalysisOptions& opts);

ScenarioAnalysis analyze(const Scenario& scenario, const AnalysisOptions& opts);

/// Header "target_return,risk,<asset...>", one row per frontier point.
void write_frontier_csv(std::ostream& out, const ScenarioAnalysis& a);

nlohmann::ordered_json portfolio_json(const Portfolio& p);
nlohmann::ordered_json correlation_json(const AssetStats& stats);
nlohmann::ordered_json summary_json(const ScenarioAnalysis& a, const AnalysisOptions& opts);

/// Human-readable MVP / max-Sharpe summary in percent.
void write_summary_text(std::ostream& out, const ScenarioAnalysis& a, const AnalysisOptions& opts);

/// Labelled correlation matrix with 8 decimal places.
void write_correlation_table(std::ostream& out, const AssetStats& stats);

struct ComparisonReport {
  std::vector<ScenarioAnalysis> scenarios;  ///< input order
  std::vector<std::size_t> by_mvp_risk;     ///< indices, MVP risk ascending (stable)
};

ComparisonReport build_comparison(std::vector<ScenarioAnalysis> scenarios);
nlohmann::ordered_json comparison_json(const ComparisonReport& report, const AnalysisOptions& opts);
void write_comparison_table(std::ostream& out, const ComparisonReport& report);

/// Overlay chart of one or more analysed scenarios.
std::string frontier_svg(const std::vector<const ScenarioAnalysis*>& analyses, const std::string& title);

}  // namespace derfolio
