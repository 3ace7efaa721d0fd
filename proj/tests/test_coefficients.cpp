#include "doctest.h"

#include <random>

#include <Eigen/Dense>

#include "fts/coefficients.hpp"
#include "fts/error.hpp"
#include "helpers.hpp"

using namespace fts;

namespace {

SpatialBasis planted_basis(int K, std::uint64_t seed) {
  SplineBasis splines(kDefaultDomain, 13, 13);
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd G = fts::testing::gaussian(splines.size(), K, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd V = qr.householderQ() * Eigen::MatrixXd::Identity(splines.size(), K);
  MeanField mean;
  mean.grand_mean = -1.0;
  mean.mean_coeffs = 0.1 * fts::testing::gaussian(splines.size(), 1, rng);
  return SpatialBasis(splines, mean, V, Eigen::VectorXd::Ones(K), Eigen::VectorXd::Ones(K) / K);
}

}  // namespace

TEST_CASE("projection solves the normal equations") {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd phi = fts::testing::gaussian(30, 4, rng);
  const Eigen::VectorXd y = fts::testing::gaussian(30, 1, rng);
  const auto p = project_rows(phi, y);
  const Eigen::VectorXd oracle = (phi.transpose() * phi).ldlt().solve(phi.transpose() * y);
  CHECK((p.beta - oracle).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_FALSE(p.min_norm);
  CHECK(p.residual_norm == doctest::Approx((phi * oracle - y).norm()));
}

TEST_CASE("short days fall back to the minimal-norm solution") {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd phi = fts::testing::gaussian(3, 6, rng);
  const Eigen::VectorXd y = fts::testing::gaussian(3, 1, rng);
  const auto p = project_rows(phi, y);
  CHECK(p.min_norm);
  const Eigen::VectorXd oracle = phi.transpose() * (phi * phi.transpose()).ldlt().solve(y);
  CHECK((p.beta - oracle).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("a tall rank-deficient design is an error") {
  std::mt19937_64 rng(3);
  Eigen::MatrixXd phi = fts::testing::gaussian(20, 3, rng);
  phi.col(2) = phi.col(0);
  try {
    project_rows(phi, Eigen::VectorXd::Ones(20));
    FAIL("expected rank-deficient design");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficientDesign);
  }
}

TEST_CASE("noise-free panels give back the planted coefficients") {
  const auto basis = planted_basis(3, 4);
  std::mt19937_64 rng(5);
  const auto locs = fts::testing::random_locations(60, rng);
  const Eigen::MatrixXd beta = fts::testing::gaussian(12, 3, rng) * 4.0;
  const Eigen::MatrixXd Phi = basis.eval_at(locs);
  const Eigen::VectorXd mu = basis.mean_at(locs);
  Eigen::MatrixXd Y = (beta * Phi.transpose()).rowwise() + mu.transpose();
  Y(2, 5) = kMissing;
  for (int i = 0; i < 60; ++i) Y(7, i) = i < 55 ? kMissing : Y(7, i);
  const auto panel = fts::testing::panel_from_errors(Y, locs);
  const auto res = project_all(basis, panel);
  REQUIRE(res.beta.rows() == 11);
  CHECK(res.skipped.size() == 1);
  CHECK(res.skipped[0].day == 7);
  for (int r = 0; r < res.beta.rows(); ++r) {
    const int t = res.beta.days[static_cast<std::size_t>(r)];
    CHECK((res.beta.values.row(r) - beta.row(t)).cwiseAbs().maxCoeff() < 1e-8);
  }
  CHECK(std::isnan(res.residuals.values(2, 5)));
  CHECK(std::isnan(res.residuals.values(7, 58)));
  CHECK(res.residuals.sigma2 < 1e-18);
}

TEST_CASE("noise variance is the sample variance of the residuals") {
  const auto basis = planted_basis(2, 6);
  std::mt19937_64 rng(7);
  const auto locs = fts::testing::random_locations(40, rng);
  const Eigen::MatrixXd Y = fts::testing::gaussian(25, 40, rng);
  const auto res = project_all(basis, fts::testing::panel_from_errors(Y, locs));
  std::vector<double> vals;
  for (Eigen::Index t = 0; t < 25; ++t)
    for (Eigen::Index i = 0; i < 40; ++i) vals.push_back(res.residuals.values(t, i));
  double m = 0.0;
  for (double v : vals) m += v;
  m /= static_cast<double>(vals.size());
  double ss = 0.0;
  for (double v : vals) ss += (v - m) * (v - m);
  CHECK(res.residuals.sigma2 == doctest::Approx(ss / static_cast<double>(vals.size() - 1)));
  CHECK(masked_variance(res.residuals.values) == doctest::Approx(res.residuals.sigma2));
}

TEST_CASE("day projection checks its inputs") {
  const auto basis = planted_basis(2, 8);
  std::mt19937_64 rng(9);
  const auto locs = fts::testing::random_locations(12, rng);
  CHECK_THROWS_AS(project_day(basis, locs, Eigen::VectorXd::Ones(11)), Error);
  Eigen::VectorXd y = Eigen::VectorXd::Ones(12);
  y.head(5).setConstant(kMissing);
  try {
    project_day(basis, locs, y);
    FAIL("expected insufficient observations");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientObservations);
  }
}
