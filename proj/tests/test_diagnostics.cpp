#include "doctest.h"

#include <numbers>
#include <random>

#include "fts/diagnostics.hpp"
#include "fts/surface_fit.hpp"
#include "helpers.hpp"

using namespace fts;

namespace {

double pearson(const Eigen::MatrixXd& s, int a, int b) {
  std::vector<double> x, y;
  for (Eigen::Index t = 0; t < s.rows(); ++t)
    if (!std::isnan(s(t, a)) && !std::isnan(s(t, b))) {
      x.push_back(s(t, a));
      y.push_back(s(t, b));
    }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("great-circle distance") {
  const Location a{"a", "a", 0.0, 0.0}, b{"b", "b", 1.0, 0.0};
  CHECK(great_circle_km(a, b) == doctest::Approx(6371.0 * std::numbers::pi / 180.0));
  CHECK(great_circle_km(a, b) == doctest::Approx(111.19).epsilon(1e-4));
  CHECK(great_circle_km(a, a) == 0.0);
  const Location ny{"ny", "ny", -73.78, 40.64}, la{"la", "la", -118.41, 33.94};
  CHECK(great_circle_km(ny, la) == doctest::Approx(great_circle_km(la, ny)));
  CHECK(great_circle_km(ny, la) == doctest::Approx(3974.0).epsilon(0.005));
  const Location pole{"p", "p", 0.0, 90.0};
  CHECK(great_circle_km(a, pole) == doctest::Approx(6371.0 * std::numbers::pi / 2));
}

TEST_CASE("pairwise-complete correlation") {
  std::mt19937_64 rng(4);
  const auto locs = fts::testing::random_locations(5, rng);
  Eigen::MatrixXd s = fts::testing::gaussian(80, 5, rng);
  s.col(1) += 0.8 * s.col(0);
  for (int t = 0; t < 20; ++t) s(t, 2) = kMissing;
  for (int t = 0; t < 60; ++t) s(t, 4) = kMissing;
  const auto c = spatial_correlation(s, locs);
  CHECK(c.values(0, 1) == doctest::Approx(pearson(s, 0, 1)));
  CHECK(c.values(2, 3) == doctest::Approx(pearson(s, 2, 3)));
  CHECK(c.values(3, 3) == doctest::Approx(1.0));
  CHECK(std::isnan(c.values(0, 4)));
  CHECK(std::isnan(c.values(4, 4)));
  CHECK(c.values(1, 0) == c.values(0, 1));

  CorrelationOptions global{Completeness::Global, 30};
  const auto g = spatial_correlation(s.leftCols(4), std::span(locs).first(4), CorrelationKind::Before, global);
  Eigen::MatrixXd common = s.bottomRows(60).leftCols(4);
  CHECK(g.values(0, 1) == doctest::Approx(pearson(common, 0, 1)));
}

TEST_CASE("cities are ordered east to west") {
  std::vector<Location> locs{{"w", "w", -120, 40}, {"e", "e", -70, 40}, {"m", "m", -95, 40}};
  std::mt19937_64 rng(1);
  const auto c = spatial_correlation(fts::testing::gaussian(40, 3, rng), locs);
  CHECK(c.order == std::vector<int>{1, 2, 0});
  const auto o = c.ordered();
  CHECK(o(0, 2) == c.values(1, 0));
}

TEST_CASE("correlogram and Frobenius sum") {
  std::mt19937_64 rng(6);
  const auto locs = fts::testing::random_locations(6, rng);
  const auto c = spatial_correlation(fts::testing::gaussian(50, 6, rng), locs);
  const auto pts = correlogram(c, locs);
  CHECK(pts.size() == 15);
  for (const auto& p : pts) {
    CHECK(p.i < p.j);
    CHECK(p.distance_km == doctest::Approx(great_circle_km(locs[p.i], locs[p.j])));
    CHECK(p.correlation == c.values(p.i, p.j));
  }
  CHECK(squared_frobenius(c, c) == doctest::Approx(c.values.squaredNorm()));
  SpatialCorrelation eye{Eigen::MatrixXd::Identity(6, 6), c.order, CorrelationKind::After};
  CHECK(squared_frobenius(eye, c) == doctest::Approx(6.0));
  SpatialCorrelation masked = c;
  masked.values(0, 1) = masked.values(1, 0) = kMissing;
  CHECK(squared_frobenius(c, masked) ==
        doctest::Approx(c.values.squaredNorm() - 2 * c.values(0, 1) * c.values(0, 1)));
}

TEST_CASE("Frobenius curve for a one-factor panel") {
  SplineBasis splines(kDefaultDomain, 5, 5);
  std::mt19937_64 rng(10);
  const auto locs = fts::testing::random_locations(40, rng);
  Eigen::VectorXd loading = fts::testing::gaussian(splines.size(), 1, rng);
  loading.normalize();
  Eigen::VectorXd phi(40);
  for (int i = 0; i < 40; ++i) phi(i) = splines.evaluate(loading, locs[i].lon, locs[i].lat);
  const Eigen::VectorXd beta = fts::testing::gaussian(120, 1, rng) * 200.0;
  const Eigen::MatrixXd Y = beta * phi.transpose() + 0.1 * fts::testing::gaussian(120, 40, rng);
  const auto panel = fts::testing::panel_from_errors(Y, locs);
  const auto C = fit_all_days(splines, panel);
  const auto mean = estimate_mean(panel, C);
  const auto pcs = decompose(C, mean);
  const std::vector<int> Ks{0, 1, 2, 3};
  const auto curve = frobenius_curve(panel, splines, mean, pcs, Ks);
  REQUIRE(curve.size() == 4);
  CHECK(curve[0].sum_squared > 200.0);
  CHECK(curve[1].sum_squared < 0.2 * curve[0].sum_squared);
  CHECK(std::abs(curve[2].sum_squared - curve[1].sum_squared) < 0.1 * (curve[0].sum_squared - curve[1].sum_squared));
  CHECK(curve[1].sum_squared >= 40.0 - 1e-9);
}
