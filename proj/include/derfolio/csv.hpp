#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace derfolio::csv {

struct Row {
  std::size_t line = 0;  ///< 1-based physical line number
  std::vector<std::string> cells;
};

/// Reads comma-separated rows. Blank lines and lines starting with '#' are
/// skipped; a UTF-8 BOM and CR line endings are tolerated. Double-quoted
/// fields may contain commas and doubled quotes but not line breaks.
/// Cells are trimmed of surrounding whitespace.
std::vector<Row> read(std::istream& in, std::string_view source);

std::string trim(std::string_view s);
std::string lower(std::string_view s);

/// Locale-independent parse of a whole cell; nullopt unless the entire text is a number.
std::optional<double> parse_number(std::string_view text);

/// Shortest text that parses back to exactly `v`.
std::string format_number(double v);

/// Quotes a field if it contains a comma, quote or leading/trailing space.
std::string quote(std::string_view field);

}  // namespace derfolio::csv
