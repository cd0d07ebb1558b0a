#include "derfolio/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>

#include "derfolio/stats.hpp"

namespace derfolio {
namespace {

constexpr double kSingularPivot = 1e-12;
constexpr double kWeightFloor = -1e-11;
constexpr double kTieTolerance = 1e-12;
// spread of normalised means below which a support is treated as equal-return
constexpr double kFlatMeans = 1e-9;
constexpr double kGoldenTolerance = 1e-10;
constexpr int kSharpeSweep = 64;

/**
 * Problem in normalised coordinates: sigma divided by its mean diagonal and
 * mu mapped affinely to roughly [-1, 1]. Neither rescaling changes the
 * feasible set or the minimiser, and both keep the bordered systems well
 * scaled regardless of the units of the input.
 */
struct Normalised {
  Eigen::MatrixXd sigma;
  Eigen::VectorXd mu;
  double mu_shift = 0.0;
  double mu_scale = 1.0;

  double to_local(double target) const { return (target - mu_shift) / mu_scale; }
};

Normalised normalise(const AssetStats& stats) {
  Normalised p;
  const double mean_diag = stats.sigma.diagonal().mean();
  p.sigma = mean_diag > 0.0 ? Eigen::MatrixXd(stats.sigma / mean_diag) : stats.sigma;
  p.mu_shift = stats.mu.mean();
  const double spread = (stats.mu.array() - p.mu_shift).abs().maxCoeff();
  p.mu_scale = spread > 0.0 ? spread : 1.0;
  p.mu = (stats.mu.array() - p.mu_shift) / p.mu_scale;
  return p;
}

void check_stats(const AssetStats& stats) {
  const auto n = static_cast<Eigen::Index>(stats.size());
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "asset set is empty");
  if (stats.size() > kMaxAssets) {
    throw Error(ErrorCode::TooManyAssets, std::to_string(stats.size()) + " assets exceeds the limit of " +
                                              std::to_string(kMaxAssets));
  }
  if (stats.mu.size() != n || stats.sigma.rows() != n || stats.sigma.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "mu/sigma dimensions do not match the asset count");
  }
  if (!stats.mu.allFinite() || !stats.sigma.allFinite()) {
    throw Error(ErrorCode::NonFiniteValue, "non-finite mean or covariance entry");
  }
}

bool lexicographically_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

struct Candidate {
  Eigen::VectorXd weights;
  double variance = std::numeric_limits<double>::infinity();
};

enum class SolveStatus { Ok, Singular };

/**
 * Enumerates every support and keeps the best primal-feasible solution.
 * `target` is in normalised units. Returns Singular if any bordered system
 * that should be regular failed the pivot test.
 */
SolveStatus enumerate_supports(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& mu, std::optional<double> target,
                               std::optional<Candidate>& best) {
  const auto n = static_cast<int>(sigma.rows());
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(n));

  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    idx.clear();
    for (int i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) idx.push_back(i);
    }
    const auto k = static_cast<Eigen::Index>(idx.size());

    bool with_target = target.has_value();
    if (with_target) {
      double lo = mu[idx[0]];
      double hi = lo;
      for (int i : idx) {
        lo = std::min(lo, mu[i]);
        hi = std::max(hi, mu[i]);
      }
      if (hi - lo <= kFlatMeans) {
        // return row is parallel to the budget row on this support
        if (std::abs(0.5 * (hi + lo) - *target) > kFlatMeans) continue;
        with_target = false;
      }
    }

    const Eigen::Index m = k + 1 + (with_target ? 1 : 0);
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) kkt(a, b) = sigma(idx[a], idx[b]);
      kkt(a, k) = 1.0;
      kkt(k, a) = 1.0;
      if (with_target) {
        kkt(a, k + 1) = mu[idx[a]];
        kkt(k + 1, a) = mu[idx[a]];
      }
    }
    rhs[k] = 1.0;
    if (with_target) rhs[k + 1] = *target;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    lu.setThreshold(kSingularPivot);
    if (!lu.isInvertible()) return SolveStatus::Singular;
    const Eigen::VectorXd sol = lu.solve(rhs);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    bool feasible = true;
    for (Eigen::Index a = 0; a < k; ++a) {
      const double v = sol[a];
      if (!std::isfinite(v) || v < kWeightFloor) {
        feasible = false;
        break;
      }
      w[idx[a]] = std::max(v, 0.0);
    }
    if (!feasible) continue;
    const double total = w.sum();
    if (!(total > 0.0)) continue;
    w /= total;

    const double var = w.dot(sigma * w);
    if (!best || var < best->variance - kTieTolerance ||
        (var <= best->variance + kTieTolerance && lexicographically_less(w, best->weights))) {
      best = Candidate{std::move(w), var};
    }
  }
  return SolveStatus::Ok;
}

/// Runs the enumeration with a single ridge retry. nullopt means no feasible support.
std::optional<Eigen::VectorXd> solve_long_only(const Normalised& p, std::optional<double> target,
                                               const OptimizerConfig& cfg) {
  std::optional<Candidate> best;
  if (enumerate_supports(p.sigma, p.mu, target, best) == SolveStatus::Ok) {
    if (!best) return std::nullopt;
    return best->weights;
  }

  const auto n = p.sigma.rows();
  const double mean_diag = p.sigma.diagonal().mean();
  const Eigen::MatrixXd ridged =
      p.sigma + cfg.ridge_epsilon * mean_diag * Eigen::MatrixXd::Identity(n, n);
  best.reset();
  if (enumerate_supports(ridged, p.mu, target, best) == SolveStatus::Singular) {
    std::ostringstream os;
    os << "covariance + " << cfg.ridge_epsilon << " * mean(diag) * I is still numerically singular";
    throw Error(ErrorCode::SingularAfterRidge, os.str());
  }
  if (!best) return std::nullopt;
  return best->weights;
}

double sharpe_of(const Portfolio& p, double rf) {
  return p.risk > 0.0 ? (p.expected_return - rf) / p.risk : -std::numeric_limits<double>::infinity();
}

bool better_sharpe(const Portfolio& cand, const Portfolio& incumbent, double rf) {
  const double a = sharpe_of(cand, rf);
  const double b = sharpe_of(incumbent, rf);
  if (a > b + kTieTolerance) return true;
  if (a < b - kTieTolerance) return false;
  return lexicographically_less(cand.weights, incumbent.weights);
}

/// Unconstrained tangency weights on the support of `w`; nullopt if any is negative.
std::optional<Eigen::VectorXd> tangency_on_support(const AssetStats& stats, const Eigen::VectorXd& w, double rf) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] > 1e-9) idx.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(idx.size());
  if (k == 0) return std::nullopt;
  Eigen::MatrixXd s(k, k);
  Eigen::VectorXd excess(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    excess[a] = stats.mu[idx[a]] - rf;
    for (Eigen::Index b = 0; b < k; ++b) s(a, b) = stats.sigma(idx[a], idx[b]);
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return std::nullopt;
  const Eigen::VectorXd y = ldlt.solve(excess);
  if (!y.allFinite() || (y.array() < 0.0).any()) return std::nullopt;
  const double total = y.sum();
  if (!(total > 0.0)) return std::nullopt;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(w.size());
  for (Eigen::Index a = 0; a < k; ++a) out[idx[a]] = y[a] / total;
  return out;
}

}  // namespace

void OptimizerConfig::validate() const {
  std::ostringstream os;
  if (!std::isfinite(risk_free)) os << "risk_free must be finite";
  else if (n_frontier_points < 2) os << "n_frontier_points must be >= 2, got " << n_frontier_points;
  else if (!(ridge_epsilon >= 0.0) || !std::isfinite(ridge_epsilon)) os << "ridge_epsilon must be >= 0";
  else if (!(grid_step > 0.0 && grid_step <= 0.5)) os << "grid_step must be in (0, 0.5], got " << grid_step;
  else if (!long_only) os << "only long-only portfolios are supported";
  else return;
  throw Error(ErrorCode::InvalidConfig, os.str());
}

Portfolio min_variance(const AssetStats& stats, const OptimizerConfig& cfg) {
  cfg.validate();
  check_stats(stats);
  const Normalised p = normalise(stats);
  auto w = solve_long_only(p, std::nullopt, cfg);
  if (!w) throw Error(ErrorCode::Infeasible, "no feasible support found");
  return make_portfolio(stats, std::move(*w));
}

FrontierPoint min_variance_at_target(const AssetStats& stats, double target, const OptimizerConfig& cfg) {
  cfg.validate();
  check_stats(stats);

  FrontierPoint fp;
  fp.target_return = target;
  fp.portfolio.asset_names = stats.asset_names;
  fp.portfolio.weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(stats.size()));
  if (!std::isfinite(target)) return fp;

  const Normalised p = normalise(stats);
  const double local = p.to_local(target);
  if (local < p.mu.minCoeff() - kFlatMeans || local > p.mu.maxCoeff() + kFlatMeans) return fp;

  auto w = solve_long_only(p, local, cfg);
  if (!w) return fp;
  fp.portfolio = make_portfolio(stats, std::move(*w));
  fp.feasible = true;
  return fp;
}

std::vector<FrontierPoint> sweep_frontier(const AssetStats& stats, const OptimizerConfig& cfg) {
  const Portfolio mvp = min_variance(stats, cfg);
  const double lo = mvp.expected_return;
  const double hi = std::max(stats.mu.maxCoeff(), lo);
  const int count = cfg.n_frontier_points;

  std::vector<FrontierPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double target = k == count - 1 ? hi : lo + (hi - lo) * static_cast<double>(k) / (count - 1);
    FrontierPoint fp = min_variance_at_target(stats, target, cfg);
    if (!fp.feasible) {
      std::ostringstream os;
      os.precision(17);
      os << "frontier target " << target << " is infeasible";
      throw Error(ErrorCode::Infeasible, os.str());
    }
    out.push_back(std::move(fp));
  }
  return out;
}

Portfolio max_sharpe(const AssetStats& stats, const OptimizerConfig& cfg) {
  cfg.validate();
  check_stats(stats);
  const double rf = cfg.risk_free;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (!(stats.sigma(ii, ii) > 0.0)) {
      throw Error(ErrorCode::ZeroRisk, "asset " + stats.asset_names[i] + " has zero variance");
    }
  }
  if (!((stats.mu.array() > rf).any())) {
    std::ostringstream os;
    os << "no asset has mean return above the risk-free rate " << rf;
    throw Error(ErrorCode::NoExcessReturn, os.str());
  }
  if (stats.size() == 1) return make_portfolio(stats, Eigen::VectorXd::Ones(1));

  const Portfolio mvp = min_variance(stats, cfg);
  const double hi = stats.mu.maxCoeff();
  // Sharpe is quasi-concave in the target where the excess return is positive
  const double lo = std::min(std::max(mvp.expected_return, rf), hi);

  std::optional<Portfolio> best;
  auto consider = [&](const Portfolio& cand) {
    if (!best || better_sharpe(cand, *best, rf)) best = cand;
  };
  auto eval = [&](double t) {
    FrontierPoint fp = min_variance_at_target(stats, t, cfg);
    if (!fp.feasible) return -std::numeric_limits<double>::infinity();
    consider(fp.portfolio);
    return sharpe_of(fp.portfolio, rf);
  };

  consider(mvp);
  std::vector<double> targets(kSharpeSweep);
  std::vector<double> values(kSharpeSweep);
  for (int k = 0; k < kSharpeSweep; ++k) {
    targets[k] = k == kSharpeSweep - 1 ? hi : lo + (hi - lo) * static_cast<double>(k) / (kSharpeSweep - 1);
    values[k] = eval(targets[k]);
  }
  const auto k_best = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
  double a = targets[std::max(k_best - 1, 0)];
  double b = targets[std::min(k_best + 1, kSharpeSweep - 1)];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  for (int iter = 0; iter < 200 && (b - a) > kGoldenTolerance; ++iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  eval(0.5 * (a + b));

  // The search lands within ~1e-6 of the optimum; the exact answer is the
  // tangency portfolio restricted to its support. Near-zero weights make the
  // support ambiguous, so try a few thresholds.
  // Sharpe is flat at the optimum, so an exact candidate wins any near tie.
  const Portfolio searched = *best;
  std::optional<Portfolio> exact;
  for (double cut : {1e-9, 1e-7, 1e-5, 1e-4, 1e-3}) {
    Eigen::VectorXd mask = (searched.weights.array() > cut).select(searched.weights, 0.0);
    if (auto polished = tangency_on_support(stats, mask, rf)) {
      Portfolio cand = make_portfolio(stats, std::move(*polished));
      if (!exact || better_sharpe(cand, *exact, rf)) exact = std::move(cand);
    }
  }
  if (exact && sharpe_of(*exact, rf) >= sharpe_of(searched, rf) - 1e-9) return *exact;
  return searched;
}

OracleResult oracle_grid_search(const AssetStats& stats, const OptimizerConfig& cfg, OracleObjective objective,
                                double target) {
  cfg.validate();
  check_stats(stats);
  const std::size_t n = stats.size();
  if (n > kOracleMaxAssets) {
    throw Error(ErrorCode::TooManyAssets, "oracle grid search supports at most " +
                                              std::to_string(kOracleMaxAssets) + " assets, got " +
                                              std::to_string(n));
  }
  const double units_real = 1.0 / cfg.grid_step;
  const long units = std::lround(units_real);
  if (std::abs(static_cast<double>(units) * cfg.grid_step - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "grid_step " << cfg.grid_step << " does not divide 1";
    throw Error(ErrorCode::InvalidConfig, os.str());
  }

  const double rf = cfg.risk_free;
  // half a lattice step measured in return units
  const double band = cfg.grid_step / 2.0 * std::max(stats.mu.maxCoeff() - stats.mu.minCoeff(), 1e-15);
  std::vector<long> counts(n, 0);
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  Eigen::VectorXd best_w;
  double best_score = std::numeric_limits<double>::infinity();
  std::size_t evaluated = 0;

  // lower score is better; every objective is mapped onto minimisation
  auto visit = [&]() {
    ++evaluated;
    for (std::size_t i = 0; i < n; ++i) w[static_cast<Eigen::Index>(i)] = static_cast<double>(counts[i]) / units;
    const double var = w.dot(stats.sigma * w);
    double score = 0.0;
    switch (objective) {
      case OracleObjective::MinVariance:
        score = var;
        break;
      case OracleObjective::MaxSharpe: {
        if (!(var > 0.0)) return;
        score = -(stats.mu.dot(w) - rf) / std::sqrt(var);
        break;
      }
      case OracleObjective::MinVarianceAtTarget:
        if (std::abs(stats.mu.dot(w) - target) > band) return;
        score = var;
        break;
    }
    if (score < best_score) {
      best_score = score;
      best_w = w;
    }
  };

  std::function<void(std::size_t, long)> recurse = [&](std::size_t i, long remaining) {
    if (i + 1 == n) {
      counts[i] = remaining;
      visit();
      return;
    }
    for (long c = 0; c <= remaining; ++c) {
      counts[i] = c;
      recurse(i + 1, remaining - c);
    }
  };
  recurse(0, units);

  if (best_w.size() == 0) throw Error(ErrorCode::Infeasible, "no lattice portfolio satisfies the objective");
  return OracleResult{make_portfolio(stats, std::move(best_w)), evaluated};
}

}  // namespace derfolio
