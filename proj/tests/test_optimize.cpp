#include "doctest.h"

#include <cmath>

#include <Eigen/Dense>

#include "fts/optimize.hpp"

using namespace fts::optimize;

namespace {

double rosenbrock(const Eigen::VectorXd& x) {
  return 100.0 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1.0 - x(0), 2);
}

}  // namespace

TEST_CASE("simplex finds the Rosenbrock minimum") {
  const auto r = nelder_mead(rosenbrock, Eigen::Vector2d(-1.2, 1.0));
  CHECK(r.converged);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("quasi-Newton finds the Rosenbrock minimum") {
  const auto r = bfgs(rosenbrock, Eigen::Vector2d(-1.2, 1.0));
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.value < 1e-10);
}

TEST_CASE("finite differences on a quadratic") {
  Eigen::Matrix3d A;
  A << 4, 1, 0, 1, 3, -1, 0, -1, 2;
  const Eigen::Vector3d b(1, -2, 0.5);
  const Objective f = [&](const Eigen::VectorXd& x) { return 0.5 * x.dot(A * x) - b.dot(x); };
  const Eigen::Vector3d x(0.3, -0.7, 2.0);
  CHECK((numerical_gradient(f, x) - (A * x - b)).cwiseAbs().maxCoeff() < 1e-7);
  CHECK((numerical_hessian(f, x) - A).cwiseAbs().maxCoeff() < 1e-5);
  const auto r = bfgs(f, Eigen::Vector3d::Zero());
  CHECK((r.x - A.ldlt().solve(b)).cwiseAbs().maxCoeff() < 1e-6);
}
