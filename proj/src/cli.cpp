#include "derfolio/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "derfolio/csv.hpp"
#include "derfolio/ingest.hpp"
#include "derfolio/report.hpp"

namespace derfolio::cli {
namespace {

constexpr std::size_t kWarnAssets = 16;

std::pair<std::string, std::string> split_pair(const std::string& text, const std::string& what) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::InvalidConfig, what + " '" + text + "' is not of the form key=value");
  }
  return {csv::trim(text.substr(0, eq)), csv::trim(text.substr(eq + 1))};
}

ImportSpec parse_import_spec(const std::string& text) {
  ImportSpec spec;
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto [key, value] = split_pair(item, "import spec field");
    seen.insert(key);
    if (key == "asset") spec.asset_name = value;
    else if (key == "path") spec.path = value;
    else if (key == "unit") spec.unit = value;
    else if (key == "period") spec.period_column = value;
    else if (key == "value") spec.value_column = value;
    else if (key == "year") spec.year_column = value;
    else if (key == "kind") {
      if (value == "long" || value == "generic-long") spec.shape = ExportShape::GenericLong;
      else if (value == "wide" || value == "generic-wide") spec.shape = ExportShape::GenericWide;
      else throw Error(ErrorCode::InvalidConfig, "unknown import kind '" + value + "' (use long or wide)");
    } else if (key == "months") {
      std::stringstream ms(value);
      std::string m;
      while (std::getline(ms, m, '|')) spec.month_columns.push_back(csv::trim(m));
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown import spec field '" + key + "'");
    }
  }
  if (!seen.contains("asset") || !seen.contains("path")) {
    throw Error(ErrorCode::InvalidConfig, "import spec '" + text + "' needs at least asset= and path=");
  }
  return spec;
}

std::map<std::string, Transform> parse_transforms(const std::vector<std::string>& items) {
  std::map<std::string, Transform> out;
  for (const auto& item : items) {
    const auto [asset, name] = split_pair(item, "transform");
    Transform t;
    if (name == "identity") t = Transform::Identity;
    else if (name == "cube") t = Transform::Cube;
    else throw Error(ErrorCode::InvalidConfig, "unknown transform '" + name + "' (use identity or cube)");
    if (!out.emplace(asset, t).second) {
      throw Error(ErrorCode::InvalidConfig, "transform for '" + asset + "' given twice");
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::WriteFailure, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::WriteFailure, "failed writing '" + path + "'");
}

/// Options shared by frontier and compare.
struct AnalysisFlags {
  int points = 50;
  double risk_free = 0.0;
  double annualize = 1.0;
  std::vector<std::string> transforms;

  void attach(CLI::App& app) {
    app.add_option("--points", points, "Number of frontier points")->capture_default_str();
    app.add_option("--risk-free", risk_free, "Risk-free return per period (fraction)")->capture_default_str();
    app.add_option("--annualize", annualize, "Scale mu and variance by this factor")->capture_default_str();
    app.add_option("--transform", transforms, "asset=identity|cube (repeatable)");
  }

  AnalysisOptions options() const {
    AnalysisOptions o;
    o.optimizer.n_frontier_points = points;
    o.optimizer.risk_free = risk_free;
    o.annualize = annualize;
    o.transforms = parse_transforms(transforms);
    o.optimizer.validate();
    if (!(annualize > 0.0)) throw Error(ErrorCode::InvalidConfig, "--annualize must be positive");
    return o;
  }
};

void warn_size(const Scenario& sc, std::ostream& err) {
  if (sc.raw.size() > kWarnAssets) {
    err << "warning: " << sc.name << " has " << sc.raw.size()
        << " assets; exact support enumeration grows as 2^n and may be slow\n";
  }
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

/**
 * Long option names that appear on the command line, so config entries for
 * them can be dropped (flags override the config file).
 */
std::set<std::string> given_keys(const std::vector<std::string>& args) {
  static const std::map<std::string, std::string> short_names = {{"-i", "input"}, {"-o", "out"}};
  std::set<std::string> keys;
  for (const auto& a : args) {
    if (a.starts_with("--")) {
      keys.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    } else if (auto it = short_names.find(a.substr(0, 2)); a.size() >= 2 && it != short_names.end()) {
      keys.insert(it->second);
    }
  }
  return keys;
}

}  // namespace

std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ReadFailure, "cannot open config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = csv::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::InvalidConfig, path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = csv::trim(t.substr(0, eq));
    if (key.starts_with("--")) key.erase(0, 2);
    args.push_back("--" + key + "=" + csv::trim(t.substr(eq + 1)));
  }
  return args;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mean-variance analysis of distributed energy resources", "derfolio"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  // ingest
  std::vector<std::string> specs;
  std::string ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Merge downloaded exports into a canonical scenario file");
  ingest->add_option("--spec", specs,
                     "asset=NAME,path=FILE,kind=long|wide[,period=COL,value=COL][,year=COL,months=A|B|..][,unit=U]")
      ->required();
  ingest->add_option("-o,--out", ingest_out, "Canonical scenario file to write")->required();

  // frontier
  std::string frontier_input;
  std::string frontier_name;
  std::string out_csv;
  std::string out_svg;
  std::string out_json;
  AnalysisFlags frontier_flags;
  auto* frontier = app.add_subcommand("frontier", "MVP, max-Sharpe portfolio and efficient frontier of one scenario");
  frontier->add_option("-i,--input", frontier_input, "Canonical scenario file")->required();
  frontier->add_option("--name", frontier_name, "Scenario name (default: file stem)");
  frontier_flags.attach(*frontier);
  frontier->add_option("--out-csv", out_csv, "Frontier CSV");
  frontier->add_option("--out-svg", out_svg, "Frontier chart");
  frontier->add_option("--out-json", out_json, "JSON summary");

  // compare
  std::vector<std::string> scenario_args;
  std::string cmp_json;
  std::string cmp_svg;
  std::string cmp_txt;
  AnalysisFlags compare_flags;
  auto* compare = app.add_subcommand("compare", "Compare frontiers of several scenarios");
  compare->add_option("--scenario", scenario_args, "name=path (repeatable, at least 2)")->required();
  compare_flags.attach(*compare);
  compare->add_option("--out-json", cmp_json, "JSON comparison report");
  compare->add_option("--out-svg", cmp_svg, "Overlay chart");
  compare->add_option("--out-txt", cmp_txt, "Text comparison table");

  // correlate
  std::string corr_input;
  std::string corr_json;
  std::vector<std::string> corr_transforms;
  auto* correlate = app.add_subcommand("correlate", "Correlation matrix of a scenario's relative returns");
  correlate->add_option("-i,--input", corr_input, "Canonical scenario file")->required();
  correlate->add_option("--transform", corr_transforms, "asset=identity|cube (repeatable)");
  correlate->add_option("--out-json", corr_json, "JSON correlation matrix");

  for (auto* sub : {ingest, frontier, compare, correlate}) {
    sub->add_option("--config", "key=value file; flags on the command line take precedence");
  }

  try {
    std::vector<std::string> args = raw_args;
    // splice config entries in after the subcommand's own flags
    for (std::size_t i = 0; i < raw_args.size(); ++i) {
      std::string cfg_path;
      if (raw_args[i] == "--config" && i + 1 < raw_args.size()) cfg_path = raw_args[i + 1];
      else if (raw_args[i].starts_with("--config=")) cfg_path = raw_args[i].substr(9);
      if (cfg_path.empty()) continue;
      const auto given = given_keys(raw_args);
      for (auto& entry : read_config(cfg_path)) {
        const std::string key = entry.substr(2, entry.find('=') - 2);
        if (key == "config") throw Error(ErrorCode::InvalidConfig, "config files cannot include other configs");
        if (!given.contains(key)) args.push_back(std::move(entry));
      }
      break;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kExitInput;
    }

    if (ingest->parsed()) {
      std::vector<RawSeries> series;
      for (const auto& s : specs) series.push_back(import_column_export(parse_import_spec(s)));
      const auto merged = merge_to_canonical(series, ingest_out);
      out << "wrote " << ingest_out << " (" << merged.front().values.size() << " periods, " << merged.size()
          << " assets)\n";
      for (std::size_t k = 0; k < series.size(); ++k) {
        out << "  " << series[k].asset_name << ": " << series[k].values.size() << " observations, "
            << merged[k].values.size() << " after merge\n";
      }
      return kExitOk;
    }

    if (frontier->parsed()) {
      const AnalysisOptions opts = frontier_flags.options();
      Scenario sc = parse_canonical_file(frontier_input);
      if (!frontier_name.empty()) sc.name = frontier_name;
      warn_size(sc, err);
      const ScenarioAnalysis a = analyze(sc, opts);
      write_summary_text(out, a, opts);
      if (!out_csv.empty()) {
        std::ostringstream os;
        write_frontier_csv(os, a);
        write_file(out_csv, os.str());
      }
      if (!out_json.empty()) write_file(out_json, dump(summary_json(a, opts)));
      if (!out_svg.empty()) write_file(out_svg, frontier_svg({&a}, "Efficient frontier: " + a.name));
      return kExitOk;
    }

    if (compare->parsed()) {
      const AnalysisOptions opts = compare_flags.options();
      if (scenario_args.size() < 2) throw Error(ErrorCode::InvalidConfig, "compare needs at least 2 --scenario");
      std::vector<Scenario> scenarios;
      std::set<std::string> names;
      for (const auto& s : scenario_args) {
        const auto [name, path] = split_pair(s, "scenario");
        if (!names.insert(name).second) throw Error(ErrorCode::InvalidConfig, "scenario '" + name + "' given twice");
        Scenario sc = parse_canonical_file(path);
        sc.name = name;
        warn_size(sc, err);
        scenarios.push_back(std::move(sc));
      }
      std::vector<ScenarioAnalysis> analyses;
      for (const auto& sc : scenarios) analyses.push_back(analyze(sc, opts));
      const ComparisonReport report = build_comparison(std::move(analyses));

      std::ostringstream table;
      write_comparison_table(table, report);
      out << table.str();
      if (!cmp_txt.empty()) write_file(cmp_txt, table.str());
      if (!cmp_json.empty()) write_file(cmp_json, dump(comparison_json(report, opts)));
      if (!cmp_svg.empty()) {
        std::vector<const ScenarioAnalysis*> ptrs;
        for (const auto& a : report.scenarios) ptrs.push_back(&a);
        write_file(cmp_svg, frontier_svg(ptrs, "Efficient frontiers by scenario"));
      }
      return kExitOk;
    }

    if (correlate->parsed()) {
      AnalysisOptions opts;
      opts.transforms = parse_transforms(corr_transforms);
      const Scenario sc = parse_canonical_file(corr_input);
      const AssetStats stats = scenario_stats(sc, opts);
      write_correlation_table(out, stats);
      if (!corr_json.empty()) {
        nlohmann::ordered_json j;
        j["scenario"] = sc.name;
        j["n_periods"] = stats.n_periods;
        j["correlation"] = correlation_json(stats);
        write_file(corr_json, dump(j));
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_optimization_error(e.code()) ? kExitOptimizer : kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace derfolio::cli
