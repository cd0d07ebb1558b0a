#include "derfolio/stats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace derfolio {
namespace {

void check_ordered(const ReturnSeries& s) {
  for (std::size_t t = 1; t < s.returns.size(); ++t) {
    const auto& prev = s.returns[t - 1].period;
    const auto& cur = s.returns[t].period;
    if (prev.granularity() != cur.granularity()) {
      throw Error(ErrorCode::MixedGranularity, s.asset_name + ": " + prev.str() + " and " + cur.str());
    }
    if (!(prev < cur)) {
      throw Error(prev == cur ? ErrorCode::DuplicatePeriod : ErrorCode::OutOfOrderPeriods,
                  s.asset_name + ": " + cur.str() + " follows " + prev.str());
    }
  }
}

}  // namespace

bool is_speed_unit(std::string_view unit) {
  if (unit.empty()) return true;
  std::string u;
  for (char c : unit) {
    if (!std::isspace(static_cast<unsigned char>(c))) u += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  static const std::set<std::string, std::less<>> speeds = {"m/s", "ms-1", "km/h", "kph", "kmh", "mph",
                                                            "kn", "kt", "kts", "knots", "ft/s"};
  return speeds.contains(u);
}

ReturnSeries to_returns(const RawSeries& raw, Transform transform) {
  validate_raw(raw);
  if (transform == Transform::Cube && !is_speed_unit(raw.unit)) {
    throw Error(ErrorCode::UnitMismatch,
                raw.asset_name + ": cube transform needs a speed series, unit is '" + raw.unit + "'");
  }

  auto x = [&](std::size_t t) {
    const double v = raw.values[t].value;
    return transform == Transform::Cube ? v * v * v : v;
  };

  ReturnSeries out;
  out.asset_name = raw.asset_name;
  out.returns.reserve(raw.values.size() - 1);
  for (std::size_t t = 1; t < raw.values.size(); ++t) {
    const double base = x(t - 1);
    if (base == 0.0) {
      throw Error(ErrorCode::ZeroBaseline, raw.asset_name + ": zero observation at " +
                                               raw.values[t - 1].period.str() +
                                               " makes the return for " + raw.values[t].period.str() +
                                               " undefined");
    }
    const double cur = x(t);
    if (cur == 0.0) {
      // a -100% return; the next return would be undefined as well
      throw Error(ErrorCode::ZeroBaseline, raw.asset_name + ": zero observation at " + raw.values[t].period.str());
    }
    const double r = (cur - base) / base;
    if (!std::isfinite(r)) {
      throw Error(ErrorCode::NonFiniteValue, raw.asset_name + ": return overflows at " + raw.values[t].period.str());
    }
    out.returns.push_back({raw.values[t].period, r});
  }
  return out;
}

std::vector<ReturnSeries> align(std::span<const ReturnSeries> series) {
  if (series.empty()) throw Error(ErrorCode::NoOverlap, "no series to align");
  for (const auto& s : series) check_ordered(s);

  std::vector<PeriodLabel> common;
  for (const auto& o : series.front().returns) common.push_back(o.period);
  for (std::size_t k = 1; k < series.size(); ++k) {
    const auto& s = series[k];
    if (!common.empty() && !s.returns.empty() &&
        common.front().granularity() != s.returns.front().period.granularity()) {
      throw Error(ErrorCode::MixedGranularity,
                  series.front().asset_name + " and " + s.asset_name + " use different period granularity");
    }
    std::vector<PeriodLabel> next;
    std::size_t i = 0;
    for (const auto& o : s.returns) {
      while (i < common.size() && common[i] < o.period) ++i;
      if (i < common.size() && common[i] == o.period) next.push_back(o.period);
    }
    common = std::move(next);
  }
  if (common.size() < 2) {
    throw Error(ErrorCode::NoOverlap, "series share " + std::to_string(common.size()) +
                                          " period(s); at least 2 are required");
  }

  std::vector<ReturnSeries> out;
  out.reserve(series.size());
  for (const auto& s : series) {
    ReturnSeries r;
    r.asset_name = s.asset_name;
    std::size_t i = 0;
    for (const auto& o : s.returns) {
      if (i < common.size() && common[i] == o.period) {
        r.returns.push_back(o);
        ++i;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

AssetStats estimate_stats(std::span<const ReturnSeries> aligned) {
  if (aligned.empty()) throw Error(ErrorCode::InsufficientData, "no series");
  const std::size_t n = aligned.size();
  const std::size_t periods = aligned.front().returns.size();
  for (const auto& s : aligned) {
    if (s.returns.size() != periods) {
      throw Error(ErrorCode::DimensionMismatch, s.asset_name + " is not aligned with " + aligned.front().asset_name);
    }
    for (std::size_t t = 0; t < periods; ++t) {
      if (!(s.returns[t].period == aligned.front().returns[t].period)) {
        throw Error(ErrorCode::DimensionMismatch,
                    s.asset_name + " is not aligned with " + aligned.front().asset_name + " at " +
                        s.returns[t].period.str());
      }
      if (!std::isfinite(s.returns[t].value)) {
        throw Error(ErrorCode::NonFiniteValue, s.asset_name + ": non-finite return at " + s.returns[t].period.str());
      }
    }
  }
  if (periods < 2) {
    throw Error(ErrorCode::InsufficientData, "need at least 2 aligned periods, have " + std::to_string(periods));
  }

  Eigen::MatrixXd x(static_cast<Eigen::Index>(periods), static_cast<Eigen::Index>(n));
  std::vector<std::string> names;
  for (std::size_t j = 0; j < n; ++j) {
    names.push_back(aligned[j].asset_name);
    for (std::size_t t = 0; t < periods; ++t) {
      x(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = aligned[j].returns[t].value;
    }
  }

  Eigen::VectorXd mu = x.colwise().mean().transpose();
  Eigen::MatrixXd centered = x.rowwise() - mu.transpose();
  Eigen::MatrixXd sigma = (centered.transpose() * centered) / static_cast<double>(periods - 1);
  return AssetStats::from_moments(std::move(names), std::move(mu), std::move(sigma), periods);
}

AssetStats annualize(const AssetStats& stats, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    std::ostringstream os;
    os << "annualisation factor must be positive, got " << k;
    throw Error(ErrorCode::InvalidConfig, os.str());
  }
  return AssetStats::from_moments(stats.asset_names, stats.mu * k, stats.sigma * k, stats.n_periods);
}

double sharpe_ratio(double expected_return, double risk_free, double risk) {
  if (!(risk > 0.0)) {
    std::ostringstream os;
    os << "risk must be positive, got " << risk;
    throw Error(ErrorCode::ZeroRisk, os.str());
  }
  return (expected_return - risk_free) / risk;
}

}  // namespace derfolio
