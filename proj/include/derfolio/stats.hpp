#pragma once

#include <span>
#include <vector>

#include "derfolio/core.hpp"

namespace derfolio {

enum class Transform {
  Identity,
  /// value^3, a wind-power proxy for speed series
  Cube,
};

/// Relative returns (x[t] - x[t-1]) / x[t-1] of the transformed series.
/// Throws TooShort, ZeroBaseline (naming the period) or UnitMismatch when a
/// cube transform is applied to a series whose unit is not a speed.
ReturnSeries to_returns(const RawSeries& raw, Transform transform = Transform::Identity);

/// True for units the cube transform accepts. An empty unit is unknown and accepted.
bool is_speed_unit(std::string_view unit);

/// Restricts every series to the intersection of their periods. Throws NoOverlap
/// when fewer than 2 periods are shared and MixedGranularity across series.
std::vector<ReturnSeries> align(std::span<const ReturnSeries> series);

/// Mean vector, unbiased (n-1) covariance and derived correlation of aligned series.
AssetStats estimate_stats(std::span<const ReturnSeries> aligned);

/// Reporting scale: mu * k, sigma * k (risk * sqrt(k)).
AssetStats annualize(const AssetStats& stats, double k);

/// (expected_return - risk_free) / risk. Throws ZeroRisk for risk <= 0.
double sharpe_ratio(double expected_return, double risk_free, double risk);

}  // namespace derfolio
