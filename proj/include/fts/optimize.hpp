#pragma once

#include <functional>

#include <Eigen/Core>

namespace fts::optimize {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct Result {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  double initial_step = 0.5;
  double f_tol = 1e-10;
  double x_tol = 1e-8;
  int max_iterations = 5000;
};

/// Downhill simplex with standard reflection/expansion/contraction/shrink
/// coefficients (1, 2, 0.5, 0.5).
Result nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                   const NelderMeadOptions& options = {});

struct BfgsOptions {
  double gradient_tol = 1e-6;
  double f_tol = 1e-13;
  double fd_step = 1e-5;
  int max_iterations = 500;
};

/// Central-difference gradient with relative step h * max(1, |x_i|).
Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x, double h = 1e-5);

/// Central-difference Hessian.
Eigen::MatrixXd numerical_hessian(const Objective& f, const Eigen::VectorXd& x, double h = 1e-4);

/// Quasi-Newton minimisation with backtracking Armijo line search and
/// finite-difference gradients.
Result bfgs(const Objective& f, const Eigen::VectorXd& x0, const BfgsOptions& options = {});

}  // namespace fts::optimize
