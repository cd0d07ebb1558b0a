#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "derfolio/core.hpp"

namespace derfolio {

/**
 * Canonical scenario file: UTF-8 comma-separated text with a header
 * "period,<asset>,..." and one row of raw observations per period, in
 * strictly increasing period order. Lines starting with '#' are comments.
 *
 * Every error message carries "<source>:<line>" and, for cell errors, the
 * column index and name.
 */
Scenario parse_canonical(std::istream& in, std::string_view source);
Scenario parse_canonical_file(const std::filesystem::path& path);

enum class ExportShape {
  /// one row per period with a period column and a value column
  GenericLong,
  /// one row per year with twelve month columns (EIA browser layout)
  /// blank months before the first or after the last value are a partial year
  GenericWide,
};

struct ImportSpec {
  std::filesystem::path path;
  ExportShape shape = ExportShape::GenericLong;
  std::string asset_name;
  std::string unit;
  // long form
  std::string period_column = "period";
  std::string value_column = "value";
  // wide form; empty month_columns means detect Jan..Dec by header name
  std::string year_column = "year";
  std::vector<std::string> month_columns;
};

/// Reads one asset from a downloaded export. Output is sorted chronologically.
RawSeries import_column_export(const ImportSpec& spec);
RawSeries import_column_export(std::istream& in, const ImportSpec& spec);

/// Restricts every series to the shared periods. Throws NoOverlap, MixedGranularity.
std::vector<RawSeries> merge_series(std::span<const RawSeries> series);

void write_canonical(std::ostream& out, std::span<const RawSeries> merged);

/// merge_series + write_canonical to `out_path`. Returns the merged series.
std::vector<RawSeries> merge_to_canonical(std::span<const RawSeries> series, const std::filesystem::path& out_path);

}  // namespace derfolio
