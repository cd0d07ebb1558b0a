#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "derfolio/error.hpp"
#include "derfolio/period.hpp"

namespace derfolio {

/// Scenarios are limited to this many assets; the exact optimizer enumerates supports.
inline constexpr std::size_t kMaxAssets = 32;

inline constexpr double kWeightSumTolerance = 1e-9;
inline constexpr double kRecomputeTolerance = 1e-9;

struct Observation {
  PeriodLabel period;
  double value;
};

/// Raw resource observations (kWh, m/s, gallons, ...) for one asset.
struct RawSeries {
  std::string asset_name;
  std::string unit;
  std::vector<Observation> values;
};

/// Relative returns; each label is the period of the later observation.
struct ReturnSeries {
  std::string asset_name;
  std::vector<Observation> returns;
};

/**
 * Sample moments of an ordered asset set.
 *
 * `rho` is always derived from `sigma`; assets with zero variance get zero
 * off-diagonal correlation and a unit diagonal.
 */
struct AssetStats {
  std::vector<std::string> asset_names;
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd rho;
  std::size_t n_periods = 0;

  std::size_t size() const noexcept { return asset_names.size(); }

  /// Builds stats from given moments (sigma is symmetrised, rho derived).
  /// Throws DimensionMismatch, TooManyAssets or NonFiniteValue.
  static AssetStats from_moments(std::vector<std::string> names, Eigen::VectorXd mu, Eigen::MatrixXd sigma,
                                 std::size_t n_periods);
};

Eigen::MatrixXd correlation_from_covariance(const Eigen::MatrixXd& sigma);

struct Portfolio {
  std::vector<std::string> asset_names;
  Eigen::VectorXd weights;
  double expected_return = 0.0;
  double risk = 0.0;
};

double portfolio_return(const AssetStats& stats, const Eigen::VectorXd& weights);
double portfolio_risk(const AssetStats& stats, const Eigen::VectorXd& weights);

/// Attaches E(r_p) and sigma_p computed from `stats`. Does not validate the weights.
Portfolio make_portfolio(const AssetStats& stats, Eigen::VectorXd weights);

struct FrontierPoint {
  double target_return = 0.0;
  Portfolio portfolio;
  bool feasible = false;
};

struct Scenario {
  std::string name;
  std::vector<RawSeries> raw;
  std::vector<ReturnSeries> returns;
  std::optional<AssetStats> stats;
  std::optional<std::vector<FrontierPoint>> frontier;
};

struct ValidationResult {
  std::optional<ErrorCode> error;
  std::string message;

  bool ok() const noexcept { return !error.has_value(); }
  explicit operator bool() const noexcept { return ok(); }
};

/// Checks long-only and budget constraints and that the stored E(r_p) and
/// sigma_p agree with a recomputation from `stats`.
ValidationResult validate_portfolio(const Portfolio& p, const AssetStats& stats);

/// Checks RawSeries invariants: >= 2 observations, finite non-negative
/// values, strictly increasing labels of one granularity. Throws on failure.
void validate_raw(const RawSeries& raw);

}  // namespace derfolio
