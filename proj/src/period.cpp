#include "derfolio/period.hpp"

#include <chrono>
#include <cstdio>

#include "derfolio/error.hpp"

namespace derfolio {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

std::optional<PeriodLabel> PeriodLabel::parse(std::string_view text) {
  // YYYYMM
  if (text.size() == 6 && all_digits(text)) {
    const int y = to_int(text.substr(0, 4));
    const int m = to_int(text.substr(4, 2));
    if (m < 1 || m > 12) return std::nullopt;
    return month(y, static_cast<unsigned>(m));
  }
  if (text.size() != 7 && text.size() != 10) return std::nullopt;
  if (!all_digits(text.substr(0, 4)) || text[4] != '-' || !all_digits(text.substr(5, 2))) return std::nullopt;
  const int y = to_int(text.substr(0, 4));
  const int m = to_int(text.substr(5, 2));
  if (m < 1 || m > 12) return std::nullopt;
  if (text.size() == 7) return PeriodLabel(std::string(text), Granularity::Month);

  if (text[7] != '-' || !all_digits(text.substr(8, 2))) return std::nullopt;
  const int d = to_int(text.substr(8, 2));
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return PeriodLabel(std::string(text), Granularity::Day);
}

PeriodLabel PeriodLabel::from_string(std::string_view text) {
  auto p = parse(text);
  if (!p) throw Error(ErrorCode::InvalidPeriod, "unrecognised period label '" + std::string(text) + "'");
  return *p;
}

PeriodLabel PeriodLabel::month(int year, unsigned month) {
  if (year < 0 || year > 9999 || month < 1 || month > 12) {
    throw Error(ErrorCode::InvalidPeriod, "year/month out of range");
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u", year, month);
  return PeriodLabel(buf, Granularity::Month);
}

}  // namespace derfolio
