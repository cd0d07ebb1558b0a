#include "derfolio/ingest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "derfolio/csv.hpp"

namespace derfolio {
namespace {

std::string at(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

std::string at(std::string_view source, std::size_t line, std::size_t col, std::string_view name) {
  return at(source, line) + ": column " + std::to_string(col + 1) + " ('" + std::string(name) + "')";
}

/// Parses one observation cell; missing cells are errors.
double parse_cell(const std::string& cell, const std::string& where) {
  if (cell.empty()) throw Error(ErrorCode::NonNumericCell, where + ": empty cell");
  const auto v = csv::parse_number(cell);
  if (!v) throw Error(ErrorCode::NonNumericCell, where + ": '" + cell + "' is not a number");
  if (!std::isfinite(*v)) throw Error(ErrorCode::NonFiniteValue, where + ": '" + cell + "' is not finite");
  if (*v < 0.0) throw Error(ErrorCode::NegativeValue, where + ": negative observation " + cell);
  return *v;
}

std::size_t find_column(const std::vector<std::string>& header, std::string_view name, const std::string& where) {
  const std::string want = csv::lower(csv::trim(name));
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (csv::lower(header[i]) == want) return i;
  }
  throw Error(ErrorCode::UnknownColumn, where + ": no column named '" + std::string(name) + "'");
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ReadFailure, "cannot open '" + path.string() + "' for reading");
  return in;
}

int month_index(std::string_view header) {
  static const std::array<const char*, 12> names = {"jan", "feb", "mar", "apr", "may", "jun",
                                                     "jul", "aug", "sep", "oct", "nov", "dec"};
  const std::string h = csv::lower(csv::trim(header));
  if (h.size() >= 3) {
    for (int m = 0; m < 12; ++m) {
      if (h.compare(0, 3, names[static_cast<std::size_t>(m)]) == 0) {
        static const std::array<const char*, 12> full = {"january", "february", "march",     "april",
                                                          "may",     "june",     "july",      "august",
                                                          "september", "october", "november", "december"};
        const std::string_view f = full[static_cast<std::size_t>(m)];
        if (h.size() == 3 || f == h || (h.size() == 4 && h[3] == '.') || (m == 8 && h == "sept")) return m + 1;
      }
    }
  }
  if (const auto v = csv::parse_number(h); v && *v >= 1 && *v <= 12 && *v == std::floor(*v) && h.size() <= 2) {
    return static_cast<int>(*v);
  }
  return 0;
}

RawSeries sorted_series(const ImportSpec& spec, std::vector<std::pair<Observation, std::size_t>> obs,
                        const std::string& source) {
  std::stable_sort(obs.begin(), obs.end(),
                   [](const auto& a, const auto& b) { return a.first.period < b.first.period; });
  RawSeries raw;
  raw.asset_name = spec.asset_name;
  raw.unit = spec.unit;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (i > 0) {
      const auto& prev = obs[i - 1].first.period;
      const auto& cur = obs[i].first.period;
      if (prev.granularity() != cur.granularity()) {
        throw Error(ErrorCode::MixedGranularity,
                    at(source, obs[i].second) + ": " + cur.str() + " mixes with " + prev.str());
      }
      if (prev == cur) throw Error(ErrorCode::DuplicatePeriod, at(source, obs[i].second) + ": " + cur.str());
    }
    raw.values.push_back(obs[i].first);
  }
  if (raw.values.size() < 2) {
    throw Error(ErrorCode::TooFewRows, source + ": " + std::to_string(raw.values.size()) +
                                           " observation(s); at least 2 are required");
  }
  return raw;
}

RawSeries import_long(const std::vector<csv::Row>& rows, const ImportSpec& spec, const std::string& source) {
  const auto& header = rows.front();
  const std::string where = at(source, header.line);
  const std::size_t pcol = find_column(header.cells, spec.period_column, where);
  const std::size_t vcol = find_column(header.cells, spec.value_column, where);

  std::vector<std::pair<Observation, std::size_t>> obs;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != header.cells.size()) {
      throw Error(ErrorCode::WrongFieldCount, at(source, row.line) + ": expected " +
                                                  std::to_string(header.cells.size()) + " fields, found " +
                                                  std::to_string(row.cells.size()));
    }
    const auto period = PeriodLabel::parse(row.cells[pcol]);
    if (!period) {
      throw Error(ErrorCode::InvalidPeriod, at(source, row.line, pcol, header.cells[pcol]) + ": '" +
                                                row.cells[pcol] + "' is not a period");
    }
    const double v = parse_cell(row.cells[vcol], at(source, row.line, vcol, header.cells[vcol]));
    obs.push_back({Observation{*period, v}, row.line});
  }
  return sorted_series(spec, std::move(obs), source);
}

RawSeries import_wide(const std::vector<csv::Row>& rows, const ImportSpec& spec, const std::string& source) {
  const auto& header = rows.front();
  const std::string where = at(source, header.line);
  const std::size_t ycol = find_column(header.cells, spec.year_column, where);

  std::array<std::size_t, 12> mcols{};
  if (!spec.month_columns.empty()) {
    if (spec.month_columns.size() != 12) {
      throw Error(ErrorCode::UnknownColumn, where + ": wide layout needs 12 month columns, got " +
                                                std::to_string(spec.month_columns.size()));
    }
    for (std::size_t m = 0; m < 12; ++m) mcols[m] = find_column(header.cells, spec.month_columns[m], where);
  } else {
    std::array<bool, 12> found{};
    for (std::size_t c = 0; c < header.cells.size(); ++c) {
      if (c == ycol) continue;
      const int m = month_index(header.cells[c]);
      if (m == 0) continue;
      const auto mi = static_cast<std::size_t>(m - 1);
      if (found[mi]) throw Error(ErrorCode::MalformedHeader, where + ": month '" + header.cells[c] + "' repeated");
      found[mi] = true;
      mcols[mi] = c;
    }
    for (std::size_t m = 0; m < 12; ++m) {
      if (!found[m]) {
        throw Error(ErrorCode::UnknownColumn, where + ": no column for month " + std::to_string(m + 1));
      }
    }
  }

  std::vector<std::pair<Observation, std::size_t>> obs;
  std::vector<std::pair<PeriodLabel, std::string>> blanks;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != header.cells.size()) {
      throw Error(ErrorCode::WrongFieldCount, at(source, row.line) + ": expected " +
                                                  std::to_string(header.cells.size()) + " fields, found " +
                                                  std::to_string(row.cells.size()));
    }
    const std::string& ycell = row.cells[ycol];
    const auto year = csv::parse_number(ycell);
    if (ycell.size() != 4 || !year || *year != std::floor(*year)) {
      throw Error(ErrorCode::InvalidPeriod, at(source, row.line, ycol, header.cells[ycol]) + ": '" + ycell +
                                                "' is not a four-digit year");
    }
    for (std::size_t m = 0; m < 12; ++m) {
      const std::size_t c = mcols[m];
      const auto label = PeriodLabel::month(static_cast<int>(*year), static_cast<unsigned>(m + 1));
      // partial years leave months blank; only gaps inside the series are errors
      if (row.cells[c].empty()) {
        blanks.emplace_back(label, at(source, row.line, c, header.cells[c]));
        continue;
      }
      const double v = parse_cell(row.cells[c], at(source, row.line, c, header.cells[c]));
      obs.push_back({Observation{label, v}, row.line});
    }
  }
  if (!obs.empty()) {
    const auto [lo, hi] = std::minmax_element(obs.begin(), obs.end(), [](const auto& a, const auto& b) {
      return a.first.period < b.first.period;
    });
    for (const auto& [label, where_blank] : blanks) {
      if (lo->first.period < label && label < hi->first.period) {
        throw Error(ErrorCode::NonNumericCell, where_blank + ": empty cell inside the observed range");
      }
    }
  }
  return sorted_series(spec, std::move(obs), source);
}

}  // namespace

Scenario parse_canonical(std::istream& in, std::string_view source) {
  const auto rows = csv::read(in, source);
  if (rows.empty()) throw Error(ErrorCode::MalformedHeader, at(source, 1) + ": file has no header row");

  const auto& header = rows.front();
  if (header.cells.empty() || csv::lower(header.cells[0]) != "period") {
    throw Error(ErrorCode::MalformedHeader, at(source, header.line) + ": first header cell must be 'period'");
  }
  if (header.cells.size() < 2) {
    throw Error(ErrorCode::MalformedHeader, at(source, header.line) + ": header names no assets");
  }
  if (header.cells.size() - 1 > kMaxAssets) {
    throw Error(ErrorCode::TooManyAssets, at(source, header.line) + ": " + std::to_string(header.cells.size() - 1) +
                                              " assets exceeds the limit of " + std::to_string(kMaxAssets));
  }
  std::set<std::string> seen_names;
  for (std::size_t c = 1; c < header.cells.size(); ++c) {
    const std::string& name = header.cells[c];
    if (name.empty()) {
      throw Error(ErrorCode::MalformedHeader, at(source, header.line) + ": column " + std::to_string(c + 1) +
                                                  " has an empty asset name");
    }
    if (!seen_names.insert(name).second) {
      throw Error(ErrorCode::MalformedHeader, at(source, header.line) + ": asset '" + name + "' appears twice");
    }
  }

  Scenario sc;
  sc.name = std::filesystem::path(std::string(source)).stem().string();
  for (std::size_t c = 1; c < header.cells.size(); ++c) sc.raw.push_back(RawSeries{header.cells[c], "", {}});

  std::set<std::string> seen_periods;
  std::optional<PeriodLabel> prev;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != header.cells.size()) {
      throw Error(ErrorCode::WrongFieldCount, at(source, row.line) + ": expected " +
                                                  std::to_string(header.cells.size()) + " fields, found " +
                                                  std::to_string(row.cells.size()));
    }
    const std::string& pcell = row.cells[0];
    const auto period = PeriodLabel::parse(pcell);
    if (!period || period->str() != pcell) {
      throw Error(ErrorCode::InvalidPeriod, at(source, row.line, 0, "period") + ": '" + pcell +
                                                "' is not YYYY-MM or YYYY-MM-DD");
    }
    if (!seen_periods.insert(pcell).second) {
      throw Error(ErrorCode::DuplicatePeriod, at(source, row.line) + ": period " + pcell + " repeats");
    }
    if (prev) {
      if (prev->granularity() != period->granularity()) {
        throw Error(ErrorCode::MixedGranularity, at(source, row.line) + ": period " + pcell +
                                                     " has a different granularity than " + prev->str());
      }
      if (!(*prev < *period)) {
        throw Error(ErrorCode::OutOfOrderPeriods, at(source, row.line) + ": period " + pcell + " follows " +
                                                      prev->str());
      }
    }
    prev = period;
    for (std::size_t c = 1; c < row.cells.size(); ++c) {
      const double v = parse_cell(row.cells[c], at(source, row.line, c, header.cells[c]));
      sc.raw[c - 1].values.push_back({*period, v});
    }
  }
  if (rows.size() - 1 < 2) {
    throw Error(ErrorCode::TooFewRows, at(source, rows.back().line) + ": " + std::to_string(rows.size() - 1) +
                                           " data row(s); at least 2 are required");
  }
  return sc;
}

Scenario parse_canonical_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_canonical(in, path.string());
}

RawSeries import_column_export(std::istream& in, const ImportSpec& spec) {
  const std::string source = spec.path.empty() ? std::string("<input>") : spec.path.string();
  if (spec.asset_name.empty()) throw Error(ErrorCode::MalformedHeader, source + ": import needs an asset name");
  const auto rows = csv::read(in, source);
  if (rows.empty()) throw Error(ErrorCode::MalformedHeader, at(source, 1) + ": file has no header row");
  return spec.shape == ExportShape::GenericLong ? import_long(rows, spec, source) : import_wide(rows, spec, source);
}

RawSeries import_column_export(const ImportSpec& spec) {
  auto in = open_input(spec.path);
  return import_column_export(in, spec);
}

std::vector<RawSeries> merge_series(std::span<const RawSeries> series) {
  if (series.empty()) throw Error(ErrorCode::NoOverlap, "no series to merge");
  std::set<std::string> names;
  for (const auto& s : series) {
    validate_raw(s);
    if (!names.insert(s.asset_name).second) {
      throw Error(ErrorCode::MalformedHeader, "asset '" + s.asset_name + "' supplied twice");
    }
    if (s.values.front().period.granularity() != series.front().values.front().period.granularity()) {
      throw Error(ErrorCode::MixedGranularity, s.asset_name + " and " + series.front().asset_name +
                                                   " use different period granularity");
    }
  }
  if (series.size() > kMaxAssets) {
    throw Error(ErrorCode::TooManyAssets, std::to_string(series.size()) + " assets exceeds the limit of " +
                                              std::to_string(kMaxAssets));
  }

  std::map<std::string, std::size_t> counts;
  for (const auto& s : series) {
    for (const auto& o : s.values) ++counts[o.period.str()];
  }
  std::vector<RawSeries> out;
  for (const auto& s : series) {
    RawSeries m{s.asset_name, s.unit, {}};
    for (const auto& o : s.values) {
      if (counts[o.period.str()] == series.size()) m.values.push_back(o);
    }
    out.push_back(std::move(m));
  }
  if (out.front().values.size() < 2) {
    throw Error(ErrorCode::NoOverlap, "series share " + std::to_string(out.front().values.size()) +
                                          " period(s); at least 2 are required");
  }
  return out;
}

void write_canonical(std::ostream& out, std::span<const RawSeries> merged) {
  out << "period";
  for (const auto& s : merged) out << ',' << csv::quote(s.asset_name);
  out << '\n';
  const std::size_t rows = merged.empty() ? 0 : merged.front().values.size();
  for (std::size_t t = 0; t < rows; ++t) {
    out << merged.front().values[t].period.str();
    for (const auto& s : merged) out << ',' << csv::format_number(s.values[t].value);
    out << '\n';
  }
}

std::vector<RawSeries> merge_to_canonical(std::span<const RawSeries> series, const std::filesystem::path& out_path) {
  auto merged = merge_series(series);
  std::ostringstream buf;
  write_canonical(buf, merged);
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::WriteFailure, "cannot open '" + out_path.string() + "' for writing");
  out << buf.str();
  out.flush();
  if (!out) throw Error(ErrorCode::WriteFailure, "failed writing '" + out_path.string() + "'");
  return merged;
}

}  // namespace derfolio
