#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "derfolio/stats.hpp"
#include "fixtures.hpp"

using namespace derfolio;

namespace {

RawSeries raw_of(std::vector<double> values, std::string unit = "kWh") {
  RawSeries r{"x", std::move(unit), {}};
  const auto labels = fixtures::months(2021, 1, values.size());
  for (std::size_t i = 0; i < values.size(); ++i) r.values.push_back({labels[i], values[i]});
  return r;
}

ReturnSeries returns_of(std::string name, const std::vector<PeriodLabel>& labels, std::vector<double> values) {
  ReturnSeries r{std::move(name), {}};
  for (std::size_t i = 0; i < values.size(); ++i) r.returns.push_back({labels[i], values[i]});
  return r;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::Infeasible;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
}

}  // namespace

TEST(ToReturns, OneStep) {
  const auto r = to_returns(raw_of({100, 110}));
  ASSERT_EQ(r.returns.size(), 1u);
  EXPECT_NEAR(r.returns[0].value, 0.10, 1e-15);
  EXPECT_EQ(r.returns[0].period.str(), "2021-02");
}

TEST(ToReturns, ConstantSeries) {
  const auto r = to_returns(raw_of({5, 5, 5}));
  ASSERT_EQ(r.returns.size(), 2u);
  EXPECT_EQ(r.returns[0].value, 0.0);
  EXPECT_EQ(r.returns[1].value, 0.0);
}

TEST(ToReturns, UpThenDown) {
  // (110 - 100) / 100 and (99 - 110) / 110
  const auto r = to_returns(raw_of({100, 110, 99}));
  EXPECT_NEAR(r.returns[0].value, 0.10, 1e-15);
  EXPECT_NEAR(r.returns[1].value, -0.10, 1e-15);
}

TEST(ToReturns, ZeroBaselineNamesPeriod) {
  try {
    to_returns(raw_of({3, 0, 4}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroBaseline);
    EXPECT_NE(std::string(e.what()).find("2021-02"), std::string::npos);
  }
  EXPECT_EQ(code_of([] { to_returns(raw_of({0, 4})); }), ErrorCode::ZeroBaseline);
}

TEST(ToReturns, TooShort) { EXPECT_EQ(code_of([] { to_returns(raw_of({5})); }), ErrorCode::TooShort); }

TEST(ToReturns, CubeTransform) {
  const auto r = to_returns(raw_of({2, 4}, "m/s"), Transform::Cube);
  EXPECT_NEAR(r.returns[0].value, 7.0, 1e-15);  // 64 / 8 - 1
  EXPECT_NO_THROW(to_returns(raw_of({2, 4}, ""), Transform::Cube));
  EXPECT_EQ(code_of([] { to_returns(raw_of({2, 4}, "gallons"), Transform::Cube); }), ErrorCode::UnitMismatch);
}

TEST(ToReturns, LengthProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> v(0.5, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> values(static_cast<std::size_t>(2 + trial % 40));
    for (auto& x : values) x = v(rng);
    const auto r = to_returns(raw_of(values));
    EXPECT_EQ(r.returns.size(), values.size() - 1);
    for (const auto& o : r.returns) EXPECT_GT(o.value, -1.0);
  }
}

TEST(Align, IdenticalLabelsUnchanged) {
  const auto m = fixtures::months(2021, 1, 4);
  const std::vector<ReturnSeries> in = {returns_of("a", m, {1, 2, 3, 4}), returns_of("b", m, {5, 6, 7, 8})};
  const auto out = align(in);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].returns.size(), 4u);
  EXPECT_EQ(out[1].returns[3].value, 8.0);
}

TEST(Align, Intersection) {
  const auto year = fixtures::months(2021, 1, 12);
  const auto late = fixtures::months(2021, 3, 10);
  std::vector<double> v12(12, 0.01);
  std::vector<double> v10(10, 0.02);
  const std::vector<ReturnSeries> in = {returns_of("a", year, v12), returns_of("b", late, v10)};
  const auto out = align(in);
  ASSERT_EQ(out[0].returns.size(), 10u);
  EXPECT_EQ(out[0].returns.front().period.str(), "2021-03");
  EXPECT_EQ(out[1].returns.back().period.str(), "2021-12");
}

TEST(Align, NoOverlap) {
  const std::vector<ReturnSeries> in = {returns_of("a", fixtures::months(2019, 1, 3), {1, 2, 3}),
                                        returns_of("b", fixtures::months(2020, 1, 3), {1, 2, 3}),
                                        returns_of("c", fixtures::months(2021, 1, 3), {1, 2, 3})};
  EXPECT_EQ(code_of([&] { align(in); }), ErrorCode::NoOverlap);
  const std::vector<ReturnSeries> one_shared = {returns_of("a", fixtures::months(2021, 1, 3), {1, 2, 3}),
                                                returns_of("b", fixtures::months(2021, 3, 3), {1, 2, 3})};
  EXPECT_EQ(code_of([&] { align(one_shared); }), ErrorCode::NoOverlap);
}

TEST(EstimateStats, SeriesWithItself) {
  const auto m = fixtures::months(2021, 1, 5);
  const std::vector<ReturnSeries> in = {returns_of("a", m, {0.1, -0.2, 0.05, 0.3, 0.0}),
                                        returns_of("b", m, {0.1, -0.2, 0.05, 0.3, 0.0})};
  const auto s = estimate_stats(in);
  EXPECT_NEAR(s.rho(0, 1), 1.0, 1e-15);
  EXPECT_EQ(s.rho(0, 0), 1.0);
}

TEST(EstimateStats, NegatedSeries) {
  const auto m = fixtures::months(2021, 1, 5);
  const std::vector<ReturnSeries> in = {returns_of("a", m, {0.1, -0.2, 0.05, 0.3, 0.0}),
                                        returns_of("b", m, {-0.1, 0.2, -0.05, -0.3, 0.0})};
  EXPECT_NEAR(estimate_stats(in).rho(0, 1), -1.0, 1e-15);
}

TEST(EstimateStats, MatchesNaiveMoments) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.01, 0.1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
    const std::size_t t = 3 + static_cast<std::size_t>(trial % 20);
    const auto labels = fixtures::months(2020, 1, t);
    std::vector<std::vector<double>> cols(n, std::vector<double>(t));
    std::vector<ReturnSeries> in;
    for (std::size_t j = 0; j < n; ++j) {
      for (auto& v : cols[j]) v = nd(rng);
      in.push_back(returns_of("a" + std::to_string(j), labels, cols[j]));
    }
    std::vector<double> mean;
    std::vector<std::vector<double>> cov;
    fixtures::naive_moments(cols, mean, cov);
    const auto s = estimate_stats(in);
    EXPECT_EQ(s.n_periods, t);
    for (std::size_t a = 0; a < n; ++a) {
      EXPECT_NEAR(s.mu[static_cast<Eigen::Index>(a)], mean[a], 1e-15);
      for (std::size_t b = 0; b < n; ++b) {
        EXPECT_NEAR(s.sigma(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)), cov[a][b], 1e-15);
      }
    }
    EXPECT_GE(min_eigenvalue(s.sigma), -1e-9);
    EXPECT_GE(min_eigenvalue(s.rho), -1e-9);
    EXPECT_LE(s.rho.cwiseAbs().maxCoeff(), 1.0);
  }
}

TEST(EstimateStats, ZeroVarianceAsset) {
  const auto m = fixtures::months(2021, 1, 4);
  const std::vector<ReturnSeries> in = {returns_of("flat", m, {0, 0, 0, 0}),
                                        returns_of("b", m, {0.1, -0.1, 0.2, 0.0})};
  const auto s = estimate_stats(in);
  EXPECT_EQ(s.rho(0, 1), 0.0);
  EXPECT_EQ(s.rho(0, 0), 1.0);
  EXPECT_EQ(s.sigma(0, 0), 0.0);
}

TEST(EstimateStats, InsufficientData) {
  const std::vector<ReturnSeries> in = {returns_of("a", fixtures::months(2021, 1, 1), {0.1})};
  EXPECT_EQ(code_of([&] { estimate_stats(in); }), ErrorCode::InsufficientData);
}

TEST(EstimateStats, Reference2021Fixture) {
  const auto s = estimate_stats(fixtures::reference_2021_returns());
  EXPECT_NEAR(s.rho(0, 1), 0.11001482, 1e-6);
  EXPECT_NEAR(s.rho(0, 2), 0.46258328, 1e-6);
  EXPECT_NEAR(s.rho(1, 2), -0.2612327, 1e-6);
  EXPECT_EQ(s.n_periods, 12u);
}

TEST(EstimateStats, PermutationEquivariance) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd(0.0, 0.1);
  const auto labels = fixtures::months(2021, 1, 15);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ReturnSeries> in;
    for (int j = 0; j < 4; ++j) {
      std::vector<double> v(15);
      for (auto& x : v) x = nd(rng);
      in.push_back(returns_of("a" + std::to_string(j), labels, v));
    }
    std::vector<int> perm = {0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<ReturnSeries> permuted;
    for (int p : perm) permuted.push_back(in[static_cast<std::size_t>(p)]);
    const auto a = estimate_stats(in);
    const auto b = estimate_stats(permuted);
    for (int i = 0; i < 4; ++i) {
      for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(b.sigma(i, k), a.sigma(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(k)]), 1e-15);
        EXPECT_NEAR(b.rho(i, k), a.rho(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(k)]), 1e-15);
      }
    }
  }
}

TEST(EstimateStats, CorrelationScaleInvariance) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> nd(0.0, 0.1);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  const auto labels = fixtures::months(2021, 1, 20);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ReturnSeries> in;
    for (int j = 0; j < 3; ++j) {
      std::vector<double> v(20);
      for (auto& x : v) x = nd(rng);
      in.push_back(returns_of("a" + std::to_string(j), labels, v));
    }
    const double c = scale(rng);
    auto scaled = in;
    for (auto& o : scaled[1].returns) o.value *= c;
    const auto a = estimate_stats(in);
    const auto b = estimate_stats(scaled);
    EXPECT_LE((a.rho - b.rho).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(b.sigma(1, 1), a.sigma(1, 1) * c * c, 1e-12 * b.sigma(1, 1));
  }
}

TEST(EstimateStats, StatisticalRoundTrip) {
  // 10,000 correlated draws via Cholesky of the target; sampling error only
  const Eigen::Matrix3d target = fixtures::reference_2021_correlation();
  const Eigen::Matrix3d l = target.llt().matrixL();
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> nd(0.0, 1.0);
  const std::size_t t = 10000;
  std::vector<ReturnSeries> in(3);
  for (int j = 0; j < 3; ++j) in[static_cast<std::size_t>(j)].asset_name = "a" + std::to_string(j);
  const auto labels = fixtures::months(1000, 1, t);
  for (std::size_t i = 0; i < t; ++i) {
    Eigen::Vector3d z(nd(rng), nd(rng), nd(rng));
    const Eigen::Vector3d x = l * z;
    for (int j = 0; j < 3; ++j) in[static_cast<std::size_t>(j)].returns.push_back({labels[i], 0.01 + 0.05 * x[j]});
  }
  const auto s = estimate_stats(in);
  EXPECT_LE((s.rho - target).cwiseAbs().maxCoeff(), 0.05);
}

TEST(Annualize, ScalesMeanAndRisk) {
  const auto s = estimate_stats(fixtures::reference_2021_returns());
  const auto a = annualize(s, 12.0);
  EXPECT_NEAR(a.mu[0], 12.0 * s.mu[0], 1e-15);
  EXPECT_NEAR(std::sqrt(a.sigma(1, 1)), std::sqrt(12.0) * std::sqrt(s.sigma(1, 1)), 1e-15);
  EXPECT_LE((a.rho - s.rho).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(annualize(s, 0.0), Error);
}

TEST(SharpeRatio, ReportedMvepInputs) {
  // 0.0244 / 0.1391, hand arithmetic
  EXPECT_NEAR(sharpe_ratio(0.0244, 0.0, 0.1391), 0.17541337167505391, 1e-12);
  EXPECT_EQ(sharpe_ratio(0.03, 0.03, 0.2), 0.0);
  EXPECT_EQ(code_of([] { sharpe_ratio(0.03, 0.0, 0.0); }), ErrorCode::ZeroRisk);
  EXPECT_EQ(code_of([] { sharpe_ratio(0.03, 0.0, -0.1); }), ErrorCode::ZeroRisk);
}
