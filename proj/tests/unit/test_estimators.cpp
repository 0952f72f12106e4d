#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cdasim/estimators/moments.hpp"
#include "cdasim/estimators/rls.hpp"
#include "cdasim/estimators/volatility.hpp"
#include "oracles/batch.hpp"

using namespace cdasim;

TEST_CASE("rls on a constant feature converges to the mean") {
  RlsEstimator est(1);
  const double one[] = {1.0};
  est.update(one, 2.0);
  est.update(one, 4.0);
  CHECK(est.coefficients()[0] == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("rls stays at zero for zero labels") {
  RlsEstimator est(4);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  for (int i = 0; i < 50; ++i) {
    const double row[] = {1.0, n01(rng), n01(rng), n01(rng)};
    est.update(row, 0.0);
  }
  for (int i = 0; i < 4; ++i) CHECK(est.coefficients()[i] == 0.0);
}

TEST_CASE("rls prediction is a dot product") {
  RlsEstimator est(4);
  const double row[] = {1.0, 100.0, 0.5, 0.25};
  CHECK(est.predict(row) == 0.0);
  // Drive coefficients to [1,0,0,2] with exact data and check predict.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  for (int i = 0; i < 200; ++i) {
    const double r[] = {1.0, n01(rng), n01(rng), n01(rng)};
    est.update(r, 1.0 + 2.0 * r[3]);
  }
  CHECK(est.predict(row) == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("rls rejects non-finite input and dimension mismatch") {
  RlsEstimator est(2);
  const double good[] = {1.0, 2.0};
  est.update(good, 3.0);
  const Eigen::VectorXd before = est.coefficients();
  const double bad[] = {1.0, std::numeric_limits<double>::quiet_NaN()};
  CHECK_FALSE(est.update(bad, 1.0));
  CHECK_FALSE(est.update(good, std::numeric_limits<double>::infinity()));
  CHECK(est.coefficients() == before);
  const double wrong[] = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(est.update(wrong, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(est.predict(wrong), std::invalid_argument);
}

TEST_CASE("rls matches batch least squares on random data") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  for (int d : {4, 6}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int m = 100;
      Eigen::MatrixXd a(m, d);
      Eigen::VectorXd y(m);
      RlsEstimator est(d);
      for (int i = 0; i < m; ++i) {
        a(i, 0) = 1.0;
        for (int j = 1; j < d; ++j) a(i, j) = n01(rng);
        y(i) = n01(rng) * 3.0 + a(i, 1);
        const Eigen::VectorXd row = a.row(i).transpose();
        est.update(std::span<const double>(row.data(), static_cast<std::size_t>(d)), y(i));
      }
      const Eigen::VectorXd ols = oracle::batch_ols(a, y);
      CHECK((est.coefficients() - ols).norm() <= 1e-6 * (1.0 + ols.norm()));
      const Eigen::VectorXd probe = Eigen::VectorXd::Ones(d);
      CHECK(est.predict(std::span<const double>(probe.data(), static_cast<std::size_t>(d))) ==
            doctest::Approx(probe.dot(ols)).epsilon(1e-6));
    }
  }
}

TEST_CASE("rls covariance stays symmetric positive definite") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n01;
  RlsEstimator est(6);
  for (int i = 0; i < 100000; ++i) {
    const double r[] = {1.0, n01(rng), n01(rng), n01(rng), n01(rng), n01(rng)};
    est.update(r, n01(rng));
  }
  const Eigen::MatrixXd& p = est.covariance();
  CHECK((p - p.transpose()).norm() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("feature rows lead with one") {
  CHECK(FeatureRow::flow(100.0, 0.5, 0.1)[0] == 1.0);
  const auto r = FeatureRow::pnl(100.0, 0.5, 0.5);
  CHECK(r[0] == 1.0);
  CHECK(r[4] == 0.25);
  CHECK(r[5] == 0.125);
}

TEST_CASE("online moments") {
  OnlineMoments m;
  CHECK_THROWS_AS(m.variance(), std::domain_error);
  m.add(1);
  CHECK(m.variance() == 0.0);
  m.add(2);
  m.add(3);
  CHECK(m.mean() == doctest::Approx(2.0));
  CHECK(m.variance() == doctest::Approx(2.0 / 3.0));

  OnlineMoments same;
  for (int i = 0; i < 1000; ++i) same.add(4.25);
  CHECK(same.variance() == 0.0);
}

TEST_CASE("online variance matches two-pass on long streams") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> dist(50.0, 7.0);
  std::vector<double> xs(100000);
  OnlineMoments m;
  for (double& x : xs) {
    x = dist(rng);
    m.add(x);
  }
  const double ref = oracle::two_pass_variance(xs);
  CHECK(std::abs(m.variance() - ref) <= 1e-10 * ref);
}

TEST_CASE("merging moments equals the concatenation") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3.0, 9.0);
  for (int trial = 0; trial < 50; ++trial) {
    OnlineMoments a;
    OnlineMoments b;
    OnlineMoments all;
    const int na = 1 + static_cast<int>(rng() % 200);
    const int nb = static_cast<int>(rng() % 200);
    for (int i = 0; i < na; ++i) { const double x = u(rng); a.add(x); all.add(x); }
    for (int i = 0; i < nb; ++i) { const double x = u(rng); b.add(x); all.add(x); }
    a.merge(b);
    CHECK(a.count() == all.count());
    CHECK(std::abs(a.variance() - all.variance()) <= 1e-12 * (1.0 + all.variance()));
  }
  OnlineMoments empty;
  OnlineMoments one;
  one.add(5.0);
  empty.merge(one);
  CHECK(empty.mean() == 5.0);
}

TEST_CASE("realized volatility") {
  const std::vector<double> flat{100, 100, 100, 100};
  CHECK(realized_volatility(flat) == 0.0);
  const std::vector<double> updown{100, 100 * std::exp(0.01), 100};
  CHECK(realized_volatility(updown) == doctest::Approx(0.01).epsilon(1e-12));
  const std::vector<double> one{100};
  CHECK_THROWS_AS(realized_volatility(one), std::invalid_argument);
  const std::vector<double> neg{100, -1};
  CHECK_THROWS_AS(realized_volatility(neg), std::invalid_argument);
  CHECK(ia_sigma(0.01, -0.04) == doctest::Approx(0.002));
  CHECK(ia_sigma(0.01, 0.04) == doctest::Approx(0.002));
}
