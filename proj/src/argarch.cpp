#include "fts/argarch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Cholesky>

#include "fts/error.hpp"
#include "fts/optimize.hpp"

namespace fts::garch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMinLength = 20;

double sample_variance_of_innovations(double psi, const Eigen::Ref<const Eigen::VectorXd>& s) {
  const Eigen::Index T = s.size();
  if (T < 3) return 0.0;
  double sum = 0.0;
  for (Eigen::Index t = 1; t < T; ++t) sum += s(t) - psi * s(t - 1);
  const double mean = sum / static_cast<double>(T - 1);
  double ss = 0.0;
  for (Eigen::Index t = 1; t < T; ++t) {
    const double d = s(t) - psi * s(t - 1) - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(T - 2);
}

}  // namespace

bool Params::valid() const {
  return std::isfinite(psi) && std::abs(psi) < 1.0 && omega > 0.0 && alpha >= 0.0 &&
         gamma >= 0.0 && alpha + gamma < 1.0 && nu > 2.0 && std::isfinite(omega) &&
         std::isfinite(nu);
}

void Params::validate() const {
  if (!(std::abs(psi) < 1.0)) throw Error(ErrorCode::InvalidParams, "|psi| must be < 1");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw Error(ErrorCode::InvalidParams, "omega must be > 0");
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidParams, "alpha must be >= 0");
  if (!(gamma >= 0.0)) throw Error(ErrorCode::InvalidParams, "gamma must be >= 0");
  if (!(alpha + gamma < 1.0)) throw Error(ErrorCode::InvalidParams, "alpha + gamma must be < 1");
  if (!(nu > 2.0) || !std::isfinite(nu)) throw Error(ErrorCode::InvalidParams, "nu must be > 2");
}

double initial_scale2(const Params& params, const Eigen::Ref<const Eigen::VectorXd>& series) {
  const double var = sample_variance_of_innovations(params.psi, series);
  if (!(var > 0.0) || !std::isfinite(var)) return params.baseline_scale2();
  return var / params.variance_factor();
}

Filtered filter(const Params& params, const Eigen::Ref<const Eigen::VectorXd>& series) {
  params.validate();
  const Eigen::Index T = series.size();
  Filtered out;
  out.innovations.resize(T);
  out.scales2.resize(T);
  if (T == 0) return out;
  out.innovations(0) = series(0);
  out.scales2(0) = initial_scale2(params, series);
  for (Eigen::Index t = 1; t < T; ++t) {
    out.innovations(t) = series(t) - params.psi * series(t - 1);
    out.scales2(t) = params.omega + params.alpha * out.innovations(t - 1) * out.innovations(t - 1) +
                     params.gamma * out.scales2(t - 1);
  }
  return out;
}

double student_t_logpdf(double x, double location, double scale2, double nu) {
  const double z2 = (x - location) * (x - location) / scale2;
  return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
         0.5 * std::log(nu * std::numbers::pi * scale2) - 0.5 * (nu + 1.0) * std::log1p(z2 / nu);
}

double neg_log_likelihood_unchecked(const Params& p,
                                    const Eigen::Ref<const Eigen::VectorXd>& s) {
  if (!p.valid()) return kInf;
  const Eigen::Index T = s.size();
  if (T < 2) return kInf;
  const double constant = std::lgamma(0.5 * (p.nu + 1.0)) - std::lgamma(0.5 * p.nu) -
                          0.5 * std::log(p.nu * std::numbers::pi);
  const double half_nu1 = 0.5 * (p.nu + 1.0);
  double eta2 = initial_scale2(p, s);
  double u_prev = s(0);
  double nll = 0.0;
  for (Eigen::Index t = 1; t < T; ++t) {
    eta2 = p.omega + p.alpha * u_prev * u_prev + p.gamma * eta2;
    const double u = s(t) - p.psi * s(t - 1);
    nll -= constant - 0.5 * std::log(eta2) - half_nu1 * std::log1p(u * u / (eta2 * p.nu));
    u_prev = u;
  }
  return std::isfinite(nll) ? nll : kInf;
}

double neg_log_likelihood(const Params& params, const Eigen::Ref<const Eigen::VectorXd>& series) {
  params.validate();
  if (series.size() < kMinLength)
    throw Error(ErrorCode::InvalidParams, "series needs at least 20 observations");
  return neg_log_likelihood_unchecked(params, series);
}

Eigen::VectorXd to_unconstrained(const Params& p) {
  Eigen::VectorXd z(5);
  const double rest = 1.0 - p.alpha - p.gamma;
  z << std::atanh(p.psi), std::log(p.omega), std::log(p.alpha / rest), std::log(p.gamma / rest),
      std::log(p.nu - 2.0);
  return z;
}

Params from_unconstrained(const Eigen::Ref<const Eigen::VectorXd>& z) {
  // Softmax against a fixed zero logit, computed stably.
  const double m = std::max({z(2), z(3), 0.0});
  const double e1 = std::exp(z(2) - m);
  const double e2 = std::exp(z(3) - m);
  const double e0 = std::exp(-m);
  const double denom = e0 + e1 + e2;
  return {std::tanh(z(0)), std::exp(z(1)), e1 / denom, e2 / denom, 2.0 + std::exp(z(4))};
}

Eigen::Matrix<double, 5, 5> unconstrained_jacobian(const Eigen::Ref<const Eigen::VectorXd>& z) {
  const Params p = from_unconstrained(z);
  Eigen::Matrix<double, 5, 5> J = Eigen::Matrix<double, 5, 5>::Zero();
  J(0, 0) = 1.0 - p.psi * p.psi;
  J(1, 1) = p.omega;
  J(2, 2) = p.alpha * (1.0 - p.alpha);
  J(2, 3) = -p.alpha * p.gamma;
  J(3, 2) = -p.alpha * p.gamma;
  J(3, 3) = p.gamma * (1.0 - p.gamma);
  J(4, 4) = p.nu - 2.0;
  return J;
}

Fit fit(const Eigen::Ref<const Eigen::VectorXd>& series, const FitOptions& options) {
  if (series.size() < kMinLength)
    throw Error(ErrorCode::InvalidParams, "series needs at least 20 observations");
  const Eigen::VectorXd s = series;
  const Eigen::Index T = s.size();

  // Lag-one autocorrelation seeds psi.
  double num = 0.0, den = 0.0;
  const double mean = s.mean();
  for (Eigen::Index t = 0; t < T; ++t) {
    den += (s(t) - mean) * (s(t) - mean);
    if (t > 0) num += (s(t) - mean) * (s(t - 1) - mean);
  }
  const double psi0 = den > 0.0 ? std::clamp(num / den, -0.95, 0.95) : 0.0;
  double var_u = sample_variance_of_innovations(psi0, s);
  if (!(var_u > 0.0)) var_u = 1.0;

  auto make_start = [&](double alpha, double gamma, double nu) {
    const double omega = var_u * (nu - 2.0) / nu * (1.0 - alpha - gamma);
    return to_unconstrained({psi0, omega, alpha, gamma, nu});
  };
  std::vector<Eigen::VectorXd> starts{make_start(0.05, 0.90, 8.0), make_start(0.10, 0.60, 5.0),
                                      make_start(0.03, 0.95, 20.0)};
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> jitter(0.0, 0.5);
  for (int r = 0; r < options.random_starts; ++r) {
    Eigen::VectorXd z = starts.front();
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) += jitter(rng);
    starts.push_back(z);
  }

  Fit out;
  const optimize::Objective objective = [&](const Eigen::VectorXd& z) {
    return neg_log_likelihood_unchecked(from_unconstrained(z), s);
  };

  optimize::Result best;
  best.value = kInf;
  optimize::NelderMeadOptions nm;
  nm.max_iterations = options.max_simplex_iterations;
  for (const auto& z0 : starts) {
    auto r = optimize::nelder_mead(objective, z0, nm);
    out.evaluations += r.evaluations;
    if (r.value < best.value) best = r;
  }
  optimize::BfgsOptions bo;
  bo.max_iterations = options.max_bfgs_iterations;
  auto refined = optimize::bfgs(objective, best.x, bo);
  out.evaluations += refined.evaluations;
  if (refined.value <= best.value) {
    best.x = refined.x;
    best.value = refined.value;
  }
  out.converged = refined.converged && std::isfinite(best.value);
  out.params = from_unconstrained(best.x);
  out.log_likelihood = -best.value;
  out.filtered = filter(out.params, s);

  const optimize::Objective original = [&](const Eigen::VectorXd& x) {
    return neg_log_likelihood_unchecked(Params{x(0), x(1), x(2), x(3), x(4)}, s);
  };
  Eigen::VectorXd theta(5);
  theta << out.params.psi, out.params.omega, out.params.alpha, out.params.gamma, out.params.nu;
  const Eigen::VectorXd grad = optimize::numerical_gradient(original, theta, 1e-6);
  out.gradient_norm = std::isfinite(grad.norm()) ? grad.norm() : kInf;

  const auto& p = out.params;
  const double tol = options.boundary_tol;
  out.boundary = p.alpha < tol || p.gamma < tol || 1.0 - p.alpha - p.gamma < tol ||
                 1.0 - std::abs(p.psi) < tol || p.nu > 1.0 / tol;

  // Standard errors: inverse Hessian in the unconstrained coordinates mapped
  // through the Jacobian of the parameter transform.
  const Eigen::MatrixXd Hz = optimize::numerical_hessian(objective, best.x, 1e-4);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(Hz);
  const bool pd = ldlt.info() == Eigen::Success && ldlt.isPositive() &&
                  (ldlt.vectorD().array() > 0.0).all();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (pd) {
    const Eigen::MatrixXd cov_z = ldlt.solve(Eigen::MatrixXd::Identity(5, 5));
    const Eigen::Matrix<double, 5, 5> J = unconstrained_jacobian(best.x);
    const Eigen::MatrixXd cov = J * cov_z * J.transpose();
    const auto est = p.as_array();
    for (int i = 0; i < 5; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      out.std_errors[ui] = cov(i, i) > 0.0 ? std::sqrt(cov(i, i)) : nan;
      out.t_ratios[ui] = est[ui] / out.std_errors[ui];
      out.p_values[ui] = std::erfc(std::abs(out.t_ratios[ui]) / std::numbers::sqrt2);
    }
  } else {
    out.std_errors.fill(nan);
    out.t_ratios.fill(nan);
    out.p_values.fill(nan);
  }

  if (!out.converged) out.message = "optimizer did not meet its convergence tolerance";
  else if (out.boundary) out.message = "solution at a constraint boundary";
  else if (!pd) out.message = "Hessian not positive definite";
  return out;
}

Simulation simulate(const Params& params, int T, std::uint64_t seed) {
  params.validate();
  if (T < 1) throw Error(ErrorCode::InvalidRange, "simulation length must be >= 1");
  std::mt19937_64 rng(seed);
  std::student_t_distribution<double> tdist(params.nu);
  Simulation sim;
  sim.beta.resize(T);
  sim.innovations.resize(T);
  sim.scales2.resize(T);
  double eta2 = params.baseline_scale2();
  double beta_prev = 0.0;
  double u_prev = 0.0;
  for (int t = 0; t < T; ++t) {
    if (t > 0) eta2 = params.omega + params.alpha * u_prev * u_prev + params.gamma * eta2;
    const double u = std::sqrt(eta2) * tdist(rng);
    const double beta = params.psi * beta_prev + u;
    sim.beta(t) = beta;
    sim.innovations(t) = u;
    sim.scales2(t) = eta2;
    beta_prev = beta;
    u_prev = u;
  }
  return sim;
}

Acf acf(const Eigen::Ref<const Eigen::VectorXd>& series, int max_lag) {
  const Eigen::Index T = series.size();
  if (max_lag < 0 || T <= max_lag)
    throw Error(ErrorCode::InvalidRange, "series length must exceed max_lag");
  const Eigen::VectorXd d = series.array() - series.mean();
  const double c0 = d.squaredNorm();
  if (!(c0 > 0.0)) throw Error(ErrorCode::Degenerate, "autocorrelation of a constant series");
  Acf out;
  out.values.resize(max_lag + 1);
  for (int h = 0; h <= max_lag; ++h)
    out.values(h) = d.head(T - h).dot(d.tail(T - h)) / c0;
  out.band = 1.96 / std::sqrt(static_cast<double>(T));
  return out;
}

}  // namespace fts::garch
