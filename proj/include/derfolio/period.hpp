#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace derfolio {

enum class Granularity { Month, Day };

/**
 * Calendar period identifier: either a year-month ("2021-07") or an ISO-8601
 * calendar date ("2021-07-15"). Labels of the same granularity order
 * chronologically; comparing labels of different granularity is a caller
 * error that alignment and ingestion reject up front.
 */
class PeriodLabel {
 public:
  /// Parses "YYYY-MM", "YYYY-MM-DD" or the compact "YYYYMM" form; the
  /// stored text is always the dashed form.
  static std::optional<PeriodLabel> parse(std::string_view text);

  /// Throws Error{InvalidPeriod} on unparseable text.
  static PeriodLabel from_string(std::string_view text);

  static PeriodLabel month(int year, unsigned month);

  const std::string& str() const noexcept { return text_; }
  Granularity granularity() const noexcept { return granularity_; }

  friend bool operator==(const PeriodLabel& a, const PeriodLabel& b) noexcept { return a.text_ == b.text_; }
  friend std::strong_ordering operator<=>(const PeriodLabel& a, const PeriodLabel& b) noexcept {
    return a.text_ <=> b.text_;
  }

 private:
  PeriodLabel(std::string text, Granularity g) : text_(std::move(text)), granularity_(g) {}

  std::string text_;
  Granularity granularity_;
};

}  // namespace derfolio
