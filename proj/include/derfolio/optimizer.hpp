#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "derfolio/core.hpp"

namespace derfolio {

struct OptimizerConfig {
  double risk_free = 0.0;
  int n_frontier_points = 50;
  /// Relative ridge applied once when a support system is singular.
  double ridge_epsilon = 1e-10;
  /// Lattice step of the brute-force oracle; 1 / grid_step must be an integer.
  double grid_step = 0.01;
  /// Reserved; only long-only portfolios are supported.
  bool long_only = true;

  /// Throws InvalidConfig.
  void validate() const;
};

/**
 * Long-only minimum-variance portfolio: min w'Sw s.t. sum(w) = 1, w >= 0.
 *
 * Solved exactly by enumerating supports. For every non-empty asset subset
 * the equality-constrained problem is solved through its bordered KKT
 * system; the lowest-variance solution with non-negative weights wins.
 * Because the problem is convex that candidate is the global optimum.
 * Ties within 1e-12 go to the lexicographically smallest weight vector.
 *
 * Throws DimensionMismatch, TooManyAssets, SingularAfterRidge.
 */
Portfolio min_variance(const AssetStats& stats, const OptimizerConfig& cfg = {});

/// Minimum-variance portfolio with expected return fixed at `target`.
/// Returns feasible = false when the target is outside [min mu, max mu].
FrontierPoint min_variance_at_target(const AssetStats& stats, double target, const OptimizerConfig& cfg = {});

/**
 * Long-only maximum-Sharpe portfolio.
 *
 * The frontier is parameterised by target return. A dense sweep brackets the
 * best target, golden-section search refines it to 1e-10, and the tangency
 * solution restricted to the resulting support is tried as an exact polish.
 *
 * Throws NoExcessReturn when no asset's mean exceeds the risk-free rate and
 * ZeroRisk when any asset has zero variance.
 */
Portfolio max_sharpe(const AssetStats& stats, const OptimizerConfig& cfg = {});

/// cfg.n_frontier_points evenly spaced targets from E(r_MVP) to max mu, ascending.
std::vector<FrontierPoint> sweep_frontier(const AssetStats& stats, const OptimizerConfig& cfg = {});

enum class OracleObjective { MinVariance, MaxSharpe, MinVarianceAtTarget };

struct OracleResult {
  Portfolio portfolio;
  std::size_t evaluated = 0;
};

/**
 * Brute-force oracle over the simplex lattice with step cfg.grid_step.
 * Candidates are visited in lexicographic order and replaced only on strict
 * improvement, so ties resolve to the lexicographically smallest weights.
 * MinVarianceAtTarget only considers candidates whose return lies within
 * grid_step / 2 of `target`.
 *
 * Throws TooManyAssets (n > 4), InvalidConfig, Infeasible (no candidate).
 */
OracleResult oracle_grid_search(const AssetStats& stats, const OptimizerConfig& cfg, OracleObjective objective,
                                double target = 0.0);

inline constexpr std::size_t kOracleMaxAssets = 4;

}  // namespace derfolio
