#include "derfolio/csv.hpp"

#include <cctype>
#include <charconv>
#include <istream>

#include "derfolio/error.hpp"

namespace derfolio::csv {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<Row> read(std::istream& in, std::string_view source) {
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;

    Row row;
    row.line = line_no;
    std::string cell;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            cell += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          cell += c;
        }
      } else if (c == '"' && trim(cell).empty()) {
        quoted = true;
        was_quoted = true;
        cell.clear();
      } else if (c == ',') {
        row.cells.push_back(was_quoted ? cell : trim(cell));
        cell.clear();
        was_quoted = false;
      } else if (was_quoted && std::isspace(static_cast<unsigned char>(c))) {
        // padding after a closing quote
      } else {
        cell += c;
      }
    }
    if (quoted) {
      throw Error(ErrorCode::WrongFieldCount,
                  std::string(source) + ":" + std::to_string(line_no) + ": unterminated quoted field");
    }
    row.cells.push_back(was_quoted ? cell : trim(cell));
    rows.push_back(std::move(row));
  }
  if (in.bad()) throw Error(ErrorCode::ReadFailure, std::string(source) + ": read error");
  return rows;
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::general);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return v;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

std::string quote(std::string_view field) {
  const bool needs = field.find_first_of(",\"") != std::string_view::npos || field != trim(field);
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace derfolio::csv
