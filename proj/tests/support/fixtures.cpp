#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace derfolio::fixtures {

AssetStats random_instance(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> a_dist(-1.0, 1.0);
  std::uniform_real_distribution<double> mu_dist(0.0, 0.05);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = a_dist(rng);
  }
  Eigen::VectorXd mu(n);
  for (int i = 0; i < n; ++i) mu[i] = mu_dist(rng);
  Eigen::MatrixXd sigma = a.transpose() * a + 0.01 * Eigen::MatrixXd::Identity(n, n);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("asset" + std::to_string(i));
  return AssetStats::from_moments(std::move(names), std::move(mu), std::move(sigma), 0);
}

double two_asset_mvp_weight(double s1, double s2, double rho) {
  const double num = s2 * s2 - rho * s1 * s2;
  const double den = s1 * s1 + s2 * s2 - 2.0 * rho * s1 * s2;
  return std::clamp(num / den, 0.0, 1.0);
}

Eigen::Matrix3d reference_2021_correlation() {
  Eigen::Matrix3d r;
  r << 1.0, 0.11001482, 0.46258328,  //
      0.11001482, 1.0, -0.2612327,   //
      0.46258328, -0.2612327, 1.0;
  return r;
}

std::vector<PeriodLabel> months(int year, unsigned month, std::size_t count) {
  std::vector<PeriodLabel> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(PeriodLabel::month(year, month));
    if (++month > 12) {
      month = 1;
      ++year;
    }
  }
  return out;
}

std::vector<ReturnSeries> exact_correlation_returns(const Eigen::Matrix3d& target, std::size_t periods,
                                                    const std::vector<std::string>& names,
                                                    const Eigen::Vector3d& means, const Eigen::Vector3d& scales,
                                                    unsigned seed) {
  const auto t = static_cast<Eigen::Index>(periods);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(t, 3);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) z(i, j) = normal(rng);
  }
  z = z.rowwise() - z.colwise().mean();
  // orthonormal columns spanning the centred data, so each still sums to zero
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(t, 3);
  q = q.rowwise() - q.colwise().mean();
  const Eigen::MatrixXd white = q * std::sqrt(static_cast<double>(t - 1));

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(target);
  const Eigen::Matrix3d root =
      eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
  const Eigen::MatrixXd x = white * root;

  // ending at 2021-12
  int start_year = 2021;
  int start_month = 12 - static_cast<int>((periods - 1) % 12);
  start_year -= static_cast<int>((periods - 1) / 12);
  const auto labels = months(start_year, static_cast<unsigned>(start_month), periods);

  std::vector<ReturnSeries> out;
  for (Eigen::Index j = 0; j < 3; ++j) {
    ReturnSeries s;
    s.asset_name = names[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < t; ++i) {
      s.returns.push_back({labels[static_cast<std::size_t>(i)], means[j] + scales[j] * x(i, j)});
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ReturnSeries> reference_2021_returns() {
  return exact_correlation_returns(reference_2021_correlation(), 12, {"solar", "wind", "diesel"},
                                   Eigen::Vector3d(0.012, 0.018, 0.006), Eigen::Vector3d(0.12, 0.2, 0.05), 2021);
}

std::vector<RawSeries> levels_from_returns(const std::vector<ReturnSeries>& returns, double start) {
  std::vector<RawSeries> out;
  for (const auto& r : returns) {
    RawSeries raw;
    raw.asset_name = r.asset_name;
    const auto& first = r.returns.front().period.str();
    int year = std::stoi(first.substr(0, 4));
    int month = std::stoi(first.substr(5, 2)) - 1;
    if (month == 0) {
      month = 12;
      --year;
    }
    double level = start;
    raw.values.push_back({PeriodLabel::month(year, static_cast<unsigned>(month)), level});
    for (const auto& o : r.returns) {
      level *= 1.0 + o.value;
      raw.values.push_back({o.period, level});
    }
    out.push_back(std::move(raw));
  }
  return out;
}

void naive_moments(const std::vector<std::vector<double>>& columns, std::vector<double>& mean,
                   std::vector<std::vector<double>>& cov) {
  const std::size_t n = columns.size();
  const std::size_t t = columns.front().size();
  mean.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (double v : columns[j]) mean[j] += v;
    mean[j] /= static_cast<double>(t);
  }
  cov.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < t; ++i) s += (columns[a][i] - mean[a]) * (columns[b][i] - mean[b]);
      cov[a][b] = s / static_cast<double>(t - 1);
    }
  }
}

}  // namespace derfolio::fixtures
