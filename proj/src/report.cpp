#include "derfolio/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "derfolio/csv.hpp"
#include "derfolio/svg.hpp"

namespace derfolio {
namespace {

using json = nlohmann::ordered_json;

std::string pct(double fraction, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f%%", decimals, fraction * 100.0);
  return buf;
}

std::string weights_text(const Portfolio& p) {
  std::string out;
  for (std::size_t i = 0; i < p.asset_names.size(); ++i) {
    if (i) out += ", ";
    out += p.asset_names[i] + " " + pct(p.weights[static_cast<Eigen::Index>(i)]);
  }
  return out;
}

json vector_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

AssetStats scenario_stats(const Scenario& scenario, const AnalysisOptions& opts) {
  std::set<std::string> names;
  for (const auto& r : scenario.raw) names.insert(r.asset_name);
  for (const auto& [asset, t] : opts.transforms) {
    if (!names.contains(asset)) {
      throw Error(ErrorCode::UnknownColumn, scenario.name + ": transform names unknown asset '" + asset + "'");
    }
  }

  std::vector<ReturnSeries> returns;
  returns.reserve(scenario.raw.size());
  for (const auto& raw : scenario.raw) {
    const auto it = opts.transforms.find(raw.asset_name);
    returns.push_back(to_returns(raw, it == opts.transforms.end() ? Transform::Identity : it->second));
  }
  const auto aligned = align(returns);
  AssetStats stats = estimate_stats(aligned);
  if (opts.annualize != 1.0) stats = annualize(stats, opts.annualize);
  return stats;
}

ScenarioAnalysis analyze(const Scenario& scenario, const AnalysisOptions& opts) {
  opts.optimizer.validate();
  ScenarioAnalysis a;
  a.name = scenario.name;
  a.stats = scenario_stats(scenario, opts);
  a.mvp = min_variance(a.stats, opts.optimizer);
  a.max_sharpe = max_sharpe(a.stats, opts.optimizer);
  a.sharpe = sharpe_ratio(a.max_sharpe.expected_return, opts.optimizer.risk_free, a.max_sharpe.risk);
  a.frontier = sweep_frontier(a.stats, opts.optimizer);
  return a;
}

void write_frontier_csv(std::ostream& out, const ScenarioAnalysis& a) {
  out << "target_return,risk";
  for (const auto& name : a.stats.asset_names) out << ',' << csv::quote(name);
  out << '\n';
  for (const auto& fp : a.frontier) {
    out << csv::format_number(fp.target_return) << ',' << csv::format_number(fp.portfolio.risk);
    for (Eigen::Index i = 0; i < fp.portfolio.weights.size(); ++i) {
      out << ',' << csv::format_number(fp.portfolio.weights[i]);
    }
    out << '\n';
  }
}

json portfolio_json(const Portfolio& p) {
  json j;
  j["weights"] = vector_json(p.weights);
  j["expected_return"] = p.expected_return;
  j["risk"] = p.risk;
  return j;
}

json correlation_json(const AssetStats& stats) {
  json j;
  j["asset_names"] = stats.asset_names;
  json rows = json::array();
  for (Eigen::Index i = 0; i < stats.rho.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < stats.rho.cols(); ++k) row.push_back(stats.rho(i, k));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j;
}

json summary_json(const ScenarioAnalysis& a, const AnalysisOptions& opts) {
  json j;
  j["scenario"] = a.name;
  j["n_periods"] = a.stats.n_periods;
  j["asset_names"] = a.stats.asset_names;
  j["mu"] = vector_json(a.stats.mu);
  j["risk_free"] = opts.optimizer.risk_free;
  j["annualize"] = opts.annualize;
  j["mvp"] = portfolio_json(a.mvp);
  json ms = portfolio_json(a.max_sharpe);
  ms["sharpe"] = a.sharpe;
  j["max_sharpe"] = std::move(ms);
  j["correlation"] = correlation_json(a.stats);
  return j;
}

void write_summary_text(std::ostream& out, const ScenarioAnalysis& a, const AnalysisOptions& opts) {
  out << "Scenario " << a.name << " (" << a.stats.size() << " assets, " << a.stats.n_periods << " periods)\n";
  out << "Minimum Variance Portfolio\n";
  out << "  Expected return for portfolio = E(r_p)        " << pct(a.mvp.expected_return) << '\n';
  out << "  (Risk) Std Dev. of portfolio = (w S w^T)^1/2  " << pct(a.mvp.risk) << '\n';
  out << "  Weights: " << weights_text(a.mvp) << '\n';
  out << "Maximum Sharpe Portfolio (r_f = " << pct(opts.optimizer.risk_free) << ")\n";
  out << "  Expected return for portfolio = E(r_p)        " << pct(a.max_sharpe.expected_return) << '\n';
  out << "  (Risk) Std Dev. of portfolio = (w S w^T)^1/2  " << pct(a.max_sharpe.risk) << '\n';
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", a.sharpe);
  out << "  Sharpe ratio                                  " << buf << '\n';
  out << "  Weights: " << weights_text(a.max_sharpe) << '\n';
}

void write_correlation_table(std::ostream& out, const AssetStats& stats) {
  std::size_t width = std::string_view("correlation").size();
  for (const auto& n : stats.asset_names) width = std::max(width, n.size());
  width = std::max<std::size_t>(width, 11) + 2;

  out << std::left << std::setw(static_cast<int>(width)) << "correlation";
  for (const auto& n : stats.asset_names) out << std::right << std::setw(static_cast<int>(width)) << n;
  out << '\n';
  for (std::size_t i = 0; i < stats.size(); ++i) {
    out << std::left << std::setw(static_cast<int>(width)) << stats.asset_names[i];
    for (std::size_t k = 0; k < stats.size(); ++k) {
      char buf[32];
      double v = stats.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      if (v == 0.0) v = 0.0;  // drop the sign of -0
      std::snprintf(buf, sizeof(buf), "%.8f", v);
      out << std::right << std::setw(static_cast<int>(width)) << buf;
    }
    out << '\n';
  }
  out << std::left;
}

ComparisonReport build_comparison(std::vector<ScenarioAnalysis> scenarios) {
  ComparisonReport r;
  r.scenarios = std::move(scenarios);
  r.by_mvp_risk.resize(r.scenarios.size());
  std::iota(r.by_mvp_risk.begin(), r.by_mvp_risk.end(), std::size_t{0});
  std::stable_sort(r.by_mvp_risk.begin(), r.by_mvp_risk.end(), [&](std::size_t a, std::size_t b) {
    return r.scenarios[a].mvp.risk < r.scenarios[b].mvp.risk;
  });
  return r;
}

json comparison_json(const ComparisonReport& report, const AnalysisOptions& opts) {
  json j;
  json list = json::array();
  for (const auto& a : report.scenarios) list.push_back(summary_json(a, opts));
  j["scenarios"] = std::move(list);
  json order = json::array();
  for (std::size_t i : report.by_mvp_risk) order.push_back(report.scenarios[i].name);
  j["ranking_by_mvp_risk"] = std::move(order);
  return j;
}

void write_comparison_table(std::ostream& out, const ComparisonReport& report) {
  std::size_t name_w = 8;
  for (const auto& a : report.scenarios) name_w = std::max(name_w, a.name.size());
  name_w += 2;
  out << std::left << std::setw(5) << "rank" << std::setw(static_cast<int>(name_w)) << "scenario" << std::right
      << std::setw(9) << "periods" << std::setw(12) << "MVP E(r_p)" << std::setw(12) << "MVP risk" << std::setw(12)
      << "MS E(r_p)" << std::setw(12) << "MS risk" << std::setw(10) << "Sharpe" << '\n';
  std::size_t rank = 1;
  for (std::size_t i : report.by_mvp_risk) {
    const auto& a = report.scenarios[i];
    char sharpe[32];
    std::snprintf(sharpe, sizeof(sharpe), "%.4f", a.sharpe);
    out << std::left << std::setw(5) << rank++ << std::setw(static_cast<int>(name_w)) << a.name << std::right
        << std::setw(9) << a.stats.n_periods << std::setw(12) << pct(a.mvp.expected_return) << std::setw(12)
        << pct(a.mvp.risk) << std::setw(12) << pct(a.max_sharpe.expected_return) << std::setw(12)
        << pct(a.max_sharpe.risk) << std::setw(10) << sharpe << '\n';
  }
  out << std::left << '\n';
  for (std::size_t i : report.by_mvp_risk) {
    const auto& a = report.scenarios[i];
    out << a.name << " MVP weights: " << weights_text(a.mvp) << '\n';
    out << a.name << " max-Sharpe weights: " << weights_text(a.max_sharpe) << '\n';
  }
}

std::string frontier_svg(const std::vector<const ScenarioAnalysis*>& analyses, const std::string& title) {
  std::vector<svg::FrontierSeries> series;
  std::string periods;
  for (const auto* a : analyses) {
    svg::FrontierSeries s;
    s.label = a->name;
    for (const auto& fp : a->frontier) s.points.push_back({fp.portfolio.risk, fp.portfolio.expected_return});
    s.mvp = svg::RiskReturn{a->mvp.risk, a->mvp.expected_return};
    s.max_sharpe = svg::RiskReturn{a->max_sharpe.risk, a->max_sharpe.expected_return};
    series.push_back(std::move(s));
    if (!periods.empty()) periods += ", ";
    periods += analyses.size() > 1 ? a->name + ": " + std::to_string(a->stats.n_periods)
                                   : std::to_string(a->stats.n_periods);
  }
  const std::string subtitle = "n_periods = " + periods;
  return svg::render_frontiers(series, title, subtitle);
}

}  // namespace derfolio
