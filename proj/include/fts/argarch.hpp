#pragma once

#include <array>
#include <limits>
#include <cstdint>
#include <string>

#include <Eigen/Core>

namespace fts::garch {

/// AR(1) level with GARCH(1,1) Student-t innovations:
///   beta_t  = psi * beta_{t-1} + u_t,      u_t | F_{t-1} ~ t_nu(0, eta_t^2)
///   eta_t^2 = omega + alpha * u_{t-1}^2 + gamma * eta_{t-1}^2
/// eta_t is the scale of the t law, so Var(u_t | F_{t-1}) = nu / (nu - 2) * eta_t^2.
struct Params {
  double psi = 0.0;
  double omega = 1.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double nu = 8.0;

  bool valid() const;
  /// Throws InvalidParams naming the violated constraint.
  void validate() const;
  /// nu / (nu - 2)
  double variance_factor() const { return nu / (nu - 2.0); }
  /// omega / (1 - alpha - gamma), the fixed point of the scale recursion
  /// when u^2 = eta^2. Finite on the whole parameter region; used to start
  /// the recursion.
  double baseline_scale2() const { return omega / (1.0 - alpha - gamma); }
  /// E[eta^2] = omega / (1 - alpha nu / (nu - 2) - gamma), or +inf when the
  /// innovations have no finite variance.
  double stationary_scale2() const {
    const double d = 1.0 - alpha * variance_factor() - gamma;
    return d > 0.0 ? omega / d : std::numeric_limits<double>::infinity();
  }
  /// Unconditional variance of beta (possibly +inf).
  double stationary_variance() const {
    return variance_factor() * stationary_scale2() / (1.0 - psi * psi);
  }
  std::array<double, 5> as_array() const { return {psi, omega, alpha, gamma, nu}; }
  static Params from_array(const std::array<double, 5>& a) { return {a[0], a[1], a[2], a[3], a[4]}; }
};

inline constexpr std::array<const char*, 5> kParamNames{"psi", "omega", "alpha", "gamma", "nu"};

struct Filtered {
  Eigen::VectorXd innovations;  // u_t, with pre-sample beta_0 = 0
  Eigen::VectorXd scales2;      // eta_t^2
};

/// eta_1^2: sample variance of u_2..u_T rescaled by (nu - 2) / nu, or the
/// baseline scale omega / (1 - alpha - gamma) when that variance is not
/// positive.
double initial_scale2(const Params& params, const Eigen::Ref<const Eigen::VectorXd>& series);

Filtered filter(const Params& params, const Eigen::Ref<const Eigen::VectorXd>& series);

/// log density of a location-scale Student-t at x.
double student_t_logpdf(double x, double location, double scale2, double nu);

/// -sum_{t>=2} log t_nu(beta_t; psi beta_{t-1}, eta_t^2). Requires valid
/// params and at least 20 observations.
double neg_log_likelihood(const Params& params, const Eigen::Ref<const Eigen::VectorXd>& series);

/// Same quantity but +inf for invalid params instead of throwing.
double neg_log_likelihood_unchecked(const Params& params,
                                    const Eigen::Ref<const Eigen::VectorXd>& series);

/// Unconstrained coordinates: psi = tanh(a), omega = exp(b),
/// (alpha, gamma) = softmax(x1, x2, 0) first two weights, nu = 2 + exp(c).
Eigen::VectorXd to_unconstrained(const Params& params);
Params from_unconstrained(const Eigen::Ref<const Eigen::VectorXd>& z);
/// d(params) / d(unconstrained).
Eigen::Matrix<double, 5, 5> unconstrained_jacobian(const Eigen::Ref<const Eigen::VectorXd>& z);

struct FitOptions {
  int max_simplex_iterations = 4000;
  int max_bfgs_iterations = 300;
  /// Extra jittered starting points drawn from this seed.
  int random_starts = 0;
  std::uint64_t seed = 0;
  double boundary_tol = 1e-4;
};

struct Fit {
  Params params;
  std::array<double, 5> std_errors{};
  std::array<double, 5> t_ratios{};
  std::array<double, 5> p_values{};
  Filtered filtered;
  double log_likelihood = 0.0;
  double gradient_norm = 0.0;  // |grad NLL| in the original parameters
  bool converged = false;
  bool boundary = false;
  int evaluations = 0;
  std::string message;
};

/// Maximum likelihood over the stationary parameter region.
Fit fit(const Eigen::Ref<const Eigen::VectorXd>& series, const FitOptions& options = {});

struct Simulation {
  Eigen::VectorXd beta;
  Eigen::VectorXd innovations;
  Eigen::VectorXd scales2;
};

/// Starts from beta_0 = 0 and eta_1^2 at the baseline scale.
Simulation simulate(const Params& params, int T, std::uint64_t seed);

struct Acf {
  Eigen::VectorXd values;  // lags 0..max_lag
  double band = 0.0;       // 1.96 / sqrt(T)
};

Acf acf(const Eigen::Ref<const Eigen::VectorXd>& series, int max_lag);

}  // namespace fts::garch
