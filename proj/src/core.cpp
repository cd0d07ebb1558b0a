#include "derfolio/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace derfolio {

AssetStats AssetStats::from_moments(std::vector<std::string> names, Eigen::VectorXd mu, Eigen::MatrixXd sigma,
                                    std::size_t n_periods) {
  const auto n = static_cast<Eigen::Index>(names.size());
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "asset set is empty");
  if (names.size() > kMaxAssets) {
    throw Error(ErrorCode::TooManyAssets, std::to_string(names.size()) + " assets exceeds the limit of " +
                                              std::to_string(kMaxAssets));
  }
  if (mu.size() != n || sigma.rows() != n || sigma.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "mu/sigma dimensions do not match the asset count");
  }
  if (!mu.allFinite() || !sigma.allFinite()) throw Error(ErrorCode::NonFiniteValue, "non-finite moment");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sigma(i, i) < 0.0) throw Error(ErrorCode::DimensionMismatch, "negative variance for " + names[i]);
  }

  AssetStats s;
  s.asset_names = std::move(names);
  s.mu = std::move(mu);
  s.sigma = 0.5 * (sigma + sigma.transpose());
  s.rho = correlation_from_covariance(s.sigma);
  s.n_periods = n_periods;
  return s;
}

Eigen::MatrixXd correlation_from_covariance(const Eigen::MatrixXd& sigma) {
  const Eigen::Index n = sigma.rows();
  Eigen::MatrixXd rho = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double vi = sigma(i, i);
      const double vj = sigma(j, j);
      double r = 0.0;
      if (vi > 0.0 && vj > 0.0) r = std::clamp(sigma(i, j) / std::sqrt(vi * vj), -1.0, 1.0);
      rho(i, j) = r;
      rho(j, i) = r;
    }
  }
  return rho;
}

double portfolio_return(const AssetStats& stats, const Eigen::VectorXd& weights) { return stats.mu.dot(weights); }

double portfolio_risk(const AssetStats& stats, const Eigen::VectorXd& weights) {
  const double var = weights.dot(stats.sigma * weights);
  return std::sqrt(std::max(var, 0.0));
}

Portfolio make_portfolio(const AssetStats& stats, Eigen::VectorXd weights) {
  if (weights.size() != static_cast<Eigen::Index>(stats.size())) {
    throw Error(ErrorCode::DimensionMismatch, "weight vector length does not match the asset count");
  }
  Portfolio p;
  p.asset_names = stats.asset_names;
  p.expected_return = portfolio_return(stats, weights);
  p.risk = portfolio_risk(stats, weights);
  p.weights = std::move(weights);
  return p;
}

ValidationResult validate_portfolio(const Portfolio& p, const AssetStats& stats) {
  auto fail = [](ErrorCode code, std::string msg) { return ValidationResult{code, std::move(msg)}; };

  if (p.asset_names != stats.asset_names || p.weights.size() != static_cast<Eigen::Index>(stats.size())) {
    return fail(ErrorCode::DimensionMismatch, "portfolio assets do not match the statistics' asset order");
  }
  if (!p.weights.allFinite()) return fail(ErrorCode::NonFiniteValue, "non-finite weight");
  for (Eigen::Index i = 0; i < p.weights.size(); ++i) {
    if (p.weights[i] < 0.0) {
      std::ostringstream os;
      os << "weight for " << p.asset_names[i] << " is " << p.weights[i];
      return fail(ErrorCode::NegativeWeight, os.str());
    }
  }
  const double sum = p.weights.sum();
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << sum;
    return fail(ErrorCode::WeightSumViolation, os.str());
  }
  // sum == 1 and all w >= 0 already bound each weight by 1 + tolerance

  const double er = portfolio_return(stats, p.weights);
  const double risk = portfolio_risk(stats, p.weights);
  if (!(p.risk >= 0.0) || std::abs(er - p.expected_return) > kRecomputeTolerance ||
      std::abs(risk - p.risk) > kRecomputeTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "stored (E=" << p.expected_return << ", risk=" << p.risk << ") vs recomputed (E=" << er
       << ", risk=" << risk << ")";
    return fail(ErrorCode::StaleDerivedValues, os.str());
  }
  return {};
}

void validate_raw(const RawSeries& raw) {
  const std::string& name = raw.asset_name;
  if (raw.values.size() < 2) {
    throw Error(ErrorCode::TooShort, name + ": need at least 2 observations, have " +
                                         std::to_string(raw.values.size()));
  }
  for (std::size_t t = 0; t < raw.values.size(); ++t) {
    const auto& obs = raw.values[t];
    if (!std::isfinite(obs.value)) {
      throw Error(ErrorCode::NonFiniteValue, name + ": non-finite value at " + obs.period.str());
    }
    if (obs.value < 0.0) throw Error(ErrorCode::NegativeValue, name + ": negative value at " + obs.period.str());
    if (t == 0) continue;
    const auto& prev = raw.values[t - 1].period;
    if (prev.granularity() != obs.period.granularity()) {
      throw Error(ErrorCode::MixedGranularity, name + ": " + prev.str() + " and " + obs.period.str());
    }
    if (!(prev < obs.period)) {
      const ErrorCode code = prev == obs.period ? ErrorCode::DuplicatePeriod : ErrorCode::OutOfOrderPeriods;
      throw Error(code, name + ": " + obs.period.str() + " follows " + prev.str());
    }
  }
}

}  // namespace derfolio
