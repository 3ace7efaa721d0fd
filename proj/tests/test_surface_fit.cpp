#include "doctest.h"

#include <random>

#include <Eigen/Dense>

#include "fts/error.hpp"
#include "fts/surface_fit.hpp"
#include "helpers.hpp"

using namespace fts;
using fts::testing::random_locations;

namespace {

Eigen::MatrixXd dense_design(const SplineBasis& basis, const std::vector<Location>& locs) {
  Eigen::MatrixXd A(static_cast<Eigen::Index>(locs.size()), basis.size());
  for (std::size_t i = 0; i < locs.size(); ++i)
    A.row(static_cast<Eigen::Index>(i)) = basis.eval_dense(locs[i].lon, locs[i].lat).transpose();
  return A;
}

Eigen::VectorXd pinv_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double rtol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > rtol * s(0)) x += svd.matrixV().col(k) * (svd.matrixU().col(k).dot(y) / s(k));
  return x;
}

}  // namespace

TEST_CASE("truncated least squares matches the normal equations on full-rank problems") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd A = fts::testing::gaussian(40, 6, rng);
  const Eigen::VectorXd y = fts::testing::gaussian(40, 1, rng);
  const auto sol = truncated_lstsq(A, y, 1e-8);
  const Eigen::VectorXd normal = (A.transpose() * A).llt().solve(A.transpose() * y);
  CHECK(sol.rank == 6);
  CHECK((sol.x - normal).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(sol.residual_norm == doctest::Approx((A * normal - y).norm()));
}

TEST_CASE("rank cap keeps the leading directions only") {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd A = fts::testing::gaussian(20, 5, rng);
  const Eigen::VectorXd y = fts::testing::gaussian(20, 1, rng);
  const auto sol = truncated_lstsq(A, y, 1e-8, 2);
  CHECK(sol.rank == 2);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd oracle = Eigen::VectorXd::Zero(5);
  for (int k = 0; k < 2; ++k)
    oracle += svd.matrixV().col(k) * (svd.matrixU().col(k).dot(y) / svd.singularValues()(k));
  CHECK((sol.x - oracle).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("design matrix rows hold the basis values") {
  SplineBasis basis(kDefaultDomain, 13, 13);
  std::mt19937_64 rng(8);
  const auto locs = random_locations(25, rng);
  const auto S = design_matrix(basis, locs);
  const Eigen::MatrixXd dense = S;
  CHECK((dense - dense_design(basis, locs)).cwiseAbs().maxCoeff() < 1e-15);
  for (Eigen::Index r = 0; r < S.rows(); ++r) CHECK(S.row(r).nonZeros() <= 16);
}

TEST_CASE("day fit equals the truncated pseudo-inverse") {
  SplineBasis basis(kDefaultDomain, 13, 13);
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 20; ++rep) {
    const auto locs = random_locations(11 + rep * 2, rng);
    Eigen::VectorXd y = fts::testing::gaussian(static_cast<Eigen::Index>(locs.size()), 1, rng) * 3.0;
    y(0) = kMissing;
    const auto fit = fit_day(basis, locs, y);
    std::vector<Location> seen(locs.begin() + 1, locs.end());
    const Eigen::VectorXd oracle = pinv_solve(dense_design(basis, seen), y.tail(y.size() - 1), 1e-8);
    CHECK((fit.coeffs - oracle).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("splines without data get exact zeros") {
  SplineBasis basis(kDefaultDomain, 13, 13);
  std::vector<Location> locs;
  for (int i = 0; i < 12; ++i) locs.push_back({"c", "c", -120.0 + 0.3 * i, 30.0 + 0.2 * i});
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(12, -2.0, 3.0);
  const auto fit = fit_day(basis, locs, y);
  const auto S = dense_design(basis, locs);
  for (int j = 0; j < basis.size(); ++j)
    if (S.col(j).cwiseAbs().maxCoeff() == 0.0) CHECK(fit.coeffs(j) == 0.0);
}

TEST_CASE("dense data reproduces a spline surface") {
  SplineBasis basis(kDefaultDomain, 4, 4);
  std::mt19937_64 rng(2);
  const Eigen::VectorXd truth = fts::testing::gaussian(basis.size(), 1, rng);
  std::vector<Location> locs;
  for (int a = 0; a < 20; ++a)
    for (int b = 0; b < 20; ++b)
      locs.push_back({"g", "g", -124.0 + 58.0 * a / 19.0, 24.0 + 25.0 * b / 19.0});
  Eigen::VectorXd y(static_cast<Eigen::Index>(locs.size()));
  for (std::size_t i = 0; i < locs.size(); ++i)
    y(static_cast<Eigen::Index>(i)) = basis.evaluate(truth, locs[i].lon, locs[i].lat);
  const auto fit = fit_day(basis, locs, y);
  CHECK(fit.rank == basis.size());
  CHECK((fit.coeffs - truth).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(fit.residual_norm < 1e-9);
}

TEST_CASE("too few or collocated observations") {
  SplineBasis basis(kDefaultDomain, 13, 13);
  std::mt19937_64 rng(1);
  const auto locs = random_locations(9, rng);
  try {
    fit_day(basis, locs, Eigen::VectorXd::Ones(9));
    FAIL("expected insufficient observations");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientObservations);
  }
  std::vector<Location> same(12, Location{"x", "x", -100.0, 40.0});
  try {
    fit_day(basis, same, Eigen::VectorXd::Ones(12));
    FAIL("expected degenerate design");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateDesign);
  }
}

TEST_CASE("constant panel gives a constant mean field") {
  SplineBasis basis(kDefaultDomain, 13, 13);
  std::mt19937_64 rng(12);
  const auto locs = random_locations(40, rng);
  Eigen::MatrixXd errors = Eigen::MatrixXd::Constant(15, 40, 2.0);
  errors.row(4).setConstant(kMissing);
  const auto panel = fts::testing::panel_from_errors(errors, locs);
  CHECK(grand_mean(panel) == doctest::Approx(2.0));
  const auto C = fit_all_days(basis, panel);
  CHECK(C.rows() == 14);
  REQUIRE(C.skipped.size() == 1);
  CHECK(C.skipped[0].day == 4);
  const auto mean = estimate_mean(panel, C);
  for (double lon : {-123.0, -100.0, -70.0})
    for (double lat : {25.0, 38.0, 48.0}) CHECK(mean.evaluate(basis, lon, lat) == doctest::Approx(2.0));
}

TEST_CASE("mean coefficients are column means of C") {
  SplineBasis basis(kDefaultDomain, 13, 13);
  std::mt19937_64 rng(14);
  const auto locs = random_locations(50, rng);
  const auto panel = fts::testing::panel_from_errors(fts::testing::gaussian(30, 50, rng), locs);
  const auto C = fit_all_days(basis, panel);
  const auto mean = estimate_mean(panel, C);
  CHECK((mean.mean_coeffs - C.values.colwise().mean().transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(mean.grand_mean == doctest::Approx(grand_mean(panel)));
}
