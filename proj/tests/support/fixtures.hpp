#pragma once

// Test-only oracles and data builders. Nothing here calls the optimizer.

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "derfolio/core.hpp"

namespace derfolio::fixtures {

/// Sigma = A'A + 0.01 I with A ~ U[-1, 1], mu ~ U[0, 0.05].
AssetStats random_instance(std::mt19937_64& rng, int n);

/// Long-only two-asset MVP weight of asset 1:
/// clip((s2^2 - rho s1 s2) / (s1^2 + s2^2 - 2 rho s1 s2), 0, 1).
double two_asset_mvp_weight(double s1, double s2, double rho);

/// Correlation matrix reported for 2021 (solar, wind, diesel).
Eigen::Matrix3d reference_2021_correlation();

/**
 * Three return series whose sample correlation equals `target` exactly (up
 * to rounding): an orthonormalised, centred white basis of `periods` rows is
 * multiplied by the symmetric square root of `target`, then each column is
 * scaled and shifted. Labels are consecutive months ending with 2021-12.
 */
std::vector<ReturnSeries> exact_correlation_returns(const Eigen::Matrix3d& target, std::size_t periods,
                                                    const std::vector<std::string>& names,
                                                    const Eigen::Vector3d& means, const Eigen::Vector3d& scales,
                                                    unsigned seed);

/// The 2021 correlation fixture with 12 monthly returns.
std::vector<ReturnSeries> reference_2021_returns();

/// Price-like levels starting at `start` whose relative returns are `returns`.
/// The first level is labelled one month before the first return.
std::vector<RawSeries> levels_from_returns(const std::vector<ReturnSeries>& returns, double start = 100.0);

/// Plain double loops: mean and (n-1) covariance, independent of estimate_stats.
void naive_moments(const std::vector<std::vector<double>>& columns, std::vector<double>& mean,
                   std::vector<std::vector<double>>& cov);

std::vector<PeriodLabel> months(int year, unsigned month, std::size_t count);

}  // namespace derfolio::fixtures
