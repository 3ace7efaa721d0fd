#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fts/argarch.hpp"
#include "fts/error.hpp"
#include "fts/optimize.hpp"

using namespace fts;
using namespace fts::garch;

namespace {

const Params kTable{0.65, 13.50, 0.09, 0.89, 8.33};

double t_density(double x, double m, double s2, double nu) {
  const double z2 = (x - m) * (x - m) / s2;
  return std::tgamma((nu + 1) / 2) / (std::tgamma(nu / 2) * std::sqrt(nu * std::numbers::pi * s2)) *
         std::pow(1 + z2 / nu, -(nu + 1) / 2);
}

}  // namespace

TEST_CASE("parameter validity") {
  CHECK(kTable.valid());
  CHECK(kTable.variance_factor() == doctest::Approx(8.33 / 6.33));
  CHECK(kTable.baseline_scale2() == doctest::Approx(13.5 / 0.02));
  // alpha nu / (nu - 2) + gamma > 1: no finite innovation variance.
  CHECK(std::isinf(kTable.stationary_scale2()));
  const Params calm{0.5, 1.0, 0.1, 0.6, 10.0};
  CHECK(calm.stationary_scale2() == doctest::Approx(1.0 / (1.0 - 0.125 - 0.6)));
  for (const Params bad : {Params{1.0, 1, 0.1, 0.1, 5}, Params{0.5, 0, 0.1, 0.1, 5},
                           Params{0.5, 1, -0.1, 0.1, 5}, Params{0.5, 1, 0.5, 0.5, 5},
                           Params{0.5, 1, 0.1, 0.1, 2}}) {
    CHECK_FALSE(bad.valid());
    try {
      bad.validate();
      FAIL("expected invalid params");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidParams);
    }
  }
}

TEST_CASE("t log density") {
  for (double nu : {3.0, 8.33, 30.0})
    CHECK(student_t_logpdf(1.7, 0.4, 2.5, nu) == doctest::Approx(std::log(t_density(1.7, 0.4, 2.5, nu))));
  const double gauss = -0.5 * std::log(2 * std::numbers::pi * 2.5) - 0.5 * 1.3 * 1.3 / 2.5;
  CHECK(student_t_logpdf(1.7, 0.4, 2.5, 1e7) == doctest::Approx(gauss).epsilon(1e-6));
}

TEST_CASE("filter follows the recursion") {
  const auto sim = simulate(kTable, 200, 3);
  const auto f = filter(kTable, sim.beta);
  const auto& b = sim.beta;
  const Eigen::Index T = b.size();
  Eigen::VectorXd u(T), eta2(T);
  u(0) = b(0);
  for (Eigen::Index t = 1; t < T; ++t) u(t) = b(t) - kTable.psi * b(t - 1);
  const Eigen::VectorXd tail = u.tail(T - 1);
  const double var = (tail.array() - tail.mean()).square().sum() / static_cast<double>(T - 2);
  eta2(0) = var * (kTable.nu - 2) / kTable.nu;
  CHECK(initial_scale2(kTable, b) == doctest::Approx(eta2(0)));
  for (Eigen::Index t = 1; t < T; ++t)
    eta2(t) = kTable.omega + kTable.alpha * u(t - 1) * u(t - 1) + kTable.gamma * eta2(t - 1);
  CHECK((f.innovations - u).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((f.scales2 - eta2).cwiseAbs().maxCoeff() < 1e-8);

  double nll = 0.0;
  for (Eigen::Index t = 1; t < T; ++t)
    nll -= std::log(t_density(b(t), kTable.psi * b(t - 1), eta2(t), kTable.nu));
  CHECK(neg_log_likelihood(kTable, b) == doctest::Approx(nll).epsilon(1e-10));
}

TEST_CASE("likelihood guards") {
  const auto sim = simulate(kTable, 19, 1);
  CHECK_THROWS_AS(neg_log_likelihood(kTable, sim.beta), Error);
  const auto longer = simulate(kTable, 50, 1);
  CHECK_THROWS_AS(neg_log_likelihood(Params{1.2, 1, 0.1, 0.1, 5}, longer.beta), Error);
  CHECK(std::isinf(neg_log_likelihood_unchecked(Params{1.2, 1, 0.1, 0.1, 5}, longer.beta)));
}

TEST_CASE("reparameterisation round trip and Jacobian") {
  const auto z = to_unconstrained(kTable);
  const auto back = from_unconstrained(z);
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(back.as_array()[i] == doctest::Approx(kTable.as_array()[i]).epsilon(1e-12));
  CHECK(from_unconstrained(Eigen::VectorXd::Constant(5, 5.0)).valid());
  CHECK(from_unconstrained(Eigen::VectorXd::Constant(5, -5.0)).valid());

  const auto J = unconstrained_jacobian(z);
  for (int i = 0; i < 5; ++i) {
    const fts::optimize::Objective fi = [i](const Eigen::VectorXd& x) {
      return from_unconstrained(x).as_array()[static_cast<std::size_t>(i)];
    };
    const Eigen::VectorXd g = fts::optimize::numerical_gradient(fi, z, 1e-6);
    CHECK((J.row(i).transpose() - g).cwiseAbs().maxCoeff() < 1e-5 * std::max(1.0, g.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("simulation is reproducible and has the stationary variance") {
  const auto a = simulate(kTable, 1000, 42);
  const auto b = simulate(kTable, 1000, 42);
  CHECK(a.beta == b.beta);
  const auto c = simulate(kTable, 1000, 43);
  CHECK(a.beta != c.beta);
  CHECK(a.scales2(0) == doctest::Approx(kTable.baseline_scale2()));

  const Params calm{0.5, 1.0, 0.1, 0.6, 10.0};
  const auto s = simulate(calm, 200000, 7);
  const double var = (s.beta.array() - s.beta.mean()).square().mean();
  CHECK(var == doctest::Approx(calm.stationary_variance()).epsilon(0.05));
}

TEST_CASE("maximum likelihood recovers the parameters of a long series") {
  const auto sim = simulate(kTable, 6000, 2024);
  const auto f = fit(sim.beta);
  CHECK(f.converged);
  CHECK(f.params.psi == doctest::Approx(0.65).epsilon(0.05));
  CHECK(f.params.alpha + f.params.gamma == doctest::Approx(0.98).epsilon(0.02));
  CHECK(f.params.nu > 5.0);
  CHECK(f.params.nu < 14.0);
  CHECK(f.log_likelihood == doctest::Approx(-neg_log_likelihood(f.params, sim.beta)));
  CHECK(f.log_likelihood >= -neg_log_likelihood(kTable, sim.beta));
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(f.std_errors[i] > 0.0);
    CHECK(f.t_ratios[i] == doctest::Approx(f.params.as_array()[i] / f.std_errors[i]));
    CHECK(f.p_values[i] == doctest::Approx(std::erfc(std::abs(f.t_ratios[i]) / std::sqrt(2.0))));
  }
  CHECK(f.p_values[0] < 1e-10);
}

TEST_CASE("fit is deterministic for a fixed seed") {
  const auto sim = simulate(kTable, 800, 99);
  FitOptions opts;
  opts.random_starts = 2;
  opts.seed = 5;
  const auto a = fit(sim.beta, opts);
  const auto b = fit(sim.beta, opts);
  CHECK(a.params.as_array() == b.params.as_array());
}

TEST_CASE("sample autocorrelation") {
  const Params ar{0.8, 1.0, 0.0, 0.0, 50.0};
  const auto s = simulate(ar, 50000, 3);
  const auto r = acf(s.beta, 3);
  CHECK(r.values(0) == doctest::Approx(1.0));
  CHECK(r.values(1) == doctest::Approx(0.8).epsilon(0.03));
  CHECK(r.values(2) == doctest::Approx(0.64).epsilon(0.05));
  CHECK(r.band == doctest::Approx(1.96 / std::sqrt(50000.0)));
  CHECK_THROWS_AS(acf(Eigen::VectorXd::Constant(30, 2.0), 3), Error);
}
