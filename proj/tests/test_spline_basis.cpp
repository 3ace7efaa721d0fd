#include "doctest.h"

#include <random>

#include "fts/error.hpp"
#include "fts/spline_basis.hpp"

using namespace fts;

namespace {

// Textbook recursion over half-open spans, 0/0 taken as 0.
double naive_bspline(const std::vector<double>& t, int i, int p, double x) {
  if (p == 0) return (t[i] <= x && x < t[i + 1]) ? 1.0 : 0.0;
  double left = 0.0, right = 0.0;
  if (t[i + p] != t[i]) left = (x - t[i]) / (t[i + p] - t[i]) * naive_bspline(t, i, p - 1, x);
  if (t[i + p + 1] != t[i + 1])
    right = (t[i + p + 1] - x) / (t[i + p + 1] - t[i + 1]) * naive_bspline(t, i + 1, p - 1, x);
  return left + right;
}

}  // namespace

TEST_CASE("clamped knots on the default domain") {
  const auto lon = make_clamped_knots(-124.0, -66.0, 13);
  const auto lat = make_clamped_knots(24.0, 49.0, 13);
  CHECK(lon.knots.size() == 21);
  CHECK(lon.num_functions() == 17);
  CHECK(lon.num_interior() == 13);
  CHECK(lon.knots[3] == -124.0);
  CHECK(lon.knots[4] == doctest::Approx(-119.857142857142857).epsilon(1e-14));
  CHECK(lat.knots[4] == doctest::Approx(25.785714285714286).epsilon(1e-14));
  CHECK(lon.knots[17] == -66.0);
  SplineBasis basis(kDefaultDomain, 13, 13);
  CHECK(basis.size() == 289);
}

TEST_CASE("knot construction rejects bad input") {
  CHECK_THROWS_AS(make_clamped_knots(1.0, 1.0, 3), Error);
  try {
    make_clamped_knots(0.0, 1.0, -1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeCount);
  }
  try {
    make_clamped_knots(2.0, 1.0, 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidRange);
  }
}

TEST_CASE("no interior knots gives the cubic Bernstein basis") {
  const auto kv = make_clamped_knots(0.0, 1.0, 0);
  const auto b = eval_1d(kv, 0.5);
  REQUIRE(b.size() == 4);
  CHECK(b(0) == doctest::Approx(0.125));
  CHECK(b(1) == doctest::Approx(0.375));
  CHECK(b(2) == doctest::Approx(0.375));
  CHECK(b(3) == doctest::Approx(0.125));
  const auto e = eval_1d(kv, 0.0);
  CHECK(e(0) == 1.0);
  CHECK(e.tail(3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("1-D values match the direct recursion") {
  const auto kv = make_clamped_knots(-3.0, 5.0, 9);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 5.0);
  double worst = 0.0;
  for (int s = 0; s < 2000; ++s) {
    const double x = u(rng);
    const auto b = eval_1d(kv, x);
    for (int i = 0; i < kv.num_functions(); ++i)
      worst = std::max(worst, std::abs(b(i) - naive_bspline(kv.knots, i, 3, x)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("right endpoint takes the limit from the left") {
  const auto kv = make_clamped_knots(0.0, 2.0, 4);
  const auto b = eval_1d(kv, 2.0);
  CHECK(b(kv.num_functions() - 1) == doctest::Approx(1.0));
  CHECK(b.sum() == doctest::Approx(1.0));
  const auto near = eval_1d(kv, std::nextafter(2.0, 0.0));
  CHECK((b - near).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partition of unity and local support") {
  SplineBasis basis(kDefaultDomain, 13, 13);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lon(-124.0, -66.0), lat(24.0, 49.0);
  for (int s = 0; s < 500; ++s) {
    const double x = lon(rng), y = lat(rng);
    CHECK(eval_1d(basis.lon_knots(), x).sum() == doctest::Approx(1.0).epsilon(1e-12));
    const auto v = basis.eval(x, y);
    CHECK(v.nonZeros() <= 16);
    CHECK(basis.eval_dense(x, y).sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("tensor index is longitude major") {
  SplineBasis basis(kDefaultDomain, 13, 13);
  const double x = -100.3, y = 37.2;
  const auto bx = eval_1d(basis.lon_knots(), x);
  const auto by = eval_1d(basis.lat_knots(), y);
  const auto v = basis.eval_dense(x, y);
  for (int i = 0; i < 17; ++i)
    for (int j = 0; j < 17; ++j) CHECK(v(i * 17 + j) == doctest::Approx(bx(i) * by(j)));
  CHECK(basis.flat_index(3, 5) == 56);
  CHECK(basis.split_index(56) == std::array<int, 2>{3, 5});
}

TEST_CASE("evaluate is the dot product with the basis") {
  SplineBasis basis(kDefaultDomain, 5, 7);
  Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(basis.size(), -1.0, 2.0);
  CHECK(basis.evaluate(c, -90.0, 40.0) == doctest::Approx(basis.eval_dense(-90.0, 40.0).dot(c)));
  CHECK(basis.evaluate(Eigen::VectorXd::Ones(basis.size()), -70.0, 30.0) == doctest::Approx(1.0));
}

TEST_CASE("points outside the domain are rejected") {
  SplineBasis basis(kDefaultDomain, 13, 13);
  try {
    basis.eval(-130.0, 30.0);
    FAIL("expected out-of-domain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfDomain);
  }
  CHECK_THROWS_AS(basis.eval(-100.0, 50.0), Error);
}

TEST_CASE("float instantiation") {
  const auto kv = make_clamped_knots(0.0f, 1.0f, 3);
  CHECK(eval_1d(kv, 0.3f).sum() == doctest::Approx(1.0f).epsilon(1e-6));
}
