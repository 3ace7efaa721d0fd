#include "fts/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace fts::optimize {

Result nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                   const NelderMeadOptions& options) {
  const Eigen::Index n = x0.size();
  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> values(static_cast<std::size_t>(n + 1));
  Result res;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  for (Eigen::Index i = 0; i < n; ++i)
    simplex[static_cast<std::size_t>(i + 1)](i) += options.initial_step;
  for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(simplex.size());
  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double spread = 0.0;
    for (const auto& p : simplex) spread = std::max(spread, (p - simplex[best]).cwiseAbs().maxCoeff());
    if (std::abs(values[worst] - values[best]) <= options.f_tol * (1.0 + std::abs(values[best])) &&
        spread <= options.x_tol) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < simplex.size(); ++i)
      if (i != worst) centroid += simplex[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                                               : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
    const double fc = eval(contracted);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      values[i] = eval(simplex[i]);
    }
  }
  const auto it = std::min_element(values.begin(), values.end());
  res.x = simplex[static_cast<std::size_t>(it - values.begin())];
  res.value = *it;
  return res;
}

Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(x(i)));
    probe(i) = x(i) + step;
    const double up = f(probe);
    probe(i) = x(i) - step;
    const double down = f(probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2.0 * step);
  }
  return g;
}

Eigen::MatrixXd numerical_hessian(const Objective& f, const Eigen::VectorXd& x, double h) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd H(n, n);
  Eigen::VectorXd steps(n);
  for (Eigen::Index i = 0; i < n; ++i) steps(i) = h * std::max(1.0, std::abs(x(i)));
  const double f0 = f(x);
  Eigen::VectorXd p = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i) = x(i) + steps(i);
    const double fp = f(p);
    p(i) = x(i) - steps(i);
    const double fm = f(p);
    p(i) = x(i);
    H(i, i) = (fp - 2.0 * f0 + fm) / (steps(i) * steps(i));
    for (Eigen::Index j = 0; j < i; ++j) {
      p(i) = x(i) + steps(i); p(j) = x(j) + steps(j);
      const double fpp = f(p);
      p(j) = x(j) - steps(j);
      const double fpm = f(p);
      p(i) = x(i) - steps(i);
      const double fmm = f(p);
      p(j) = x(j) + steps(j);
      const double fmp = f(p);
      p(i) = x(i); p(j) = x(j);
      H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * steps(i) * steps(j));
    }
  }
  return H;
}

Result bfgs(const Objective& f, const Eigen::VectorXd& x0, const BfgsOptions& options) {
  const Eigen::Index n = x0.size();
  Result res;
  res.x = x0;
  res.value = f(x0);
  ++res.evaluations;
  Eigen::VectorXd g = numerical_gradient(f, res.x, options.fd_step);
  res.evaluations += static_cast<int>(2 * n);
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);

  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    if (g.lpNorm<Eigen::Infinity>() <= options.gradient_tol * (1.0 + std::abs(res.value))) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd dir = -Hinv * g;
    if (dir.dot(g) >= 0.0) {
      Hinv.setIdentity();
      dir = -g;
    }
    double step = 1.0;
    Eigen::VectorXd candidate;
    double fc = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      candidate = res.x + step * dir;
      fc = f(candidate);
      ++res.evaluations;
      if (std::isfinite(fc) && fc <= res.value + 1e-4 * step * g.dot(dir)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No descent along a quasi-Newton direction; a steepest-descent restart
      // either makes progress or confirms stationarity to finite precision.
      if (Hinv.isIdentity()) {
        res.converged = g.lpNorm<Eigen::Infinity>() <= 1e-3 * (1.0 + std::abs(res.value));
        break;
      }
      Hinv.setIdentity();
      continue;
    }
    const Eigen::VectorXd g_new = numerical_gradient(f, candidate, options.fd_step);
    res.evaluations += static_cast<int>(2 * n);
    const Eigen::VectorXd s = candidate - res.x;
    const Eigen::VectorXd y = g_new - g;
    const double improvement = res.value - fc;
    res.x = candidate;
    g = g_new;
    const double prev = res.value;
    res.value = fc;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      Hinv = (I - rho * s * y.transpose()) * Hinv * (I - rho * y * s.transpose()) +
             rho * s * s.transpose();
    }
    if (improvement <= options.f_tol * (1.0 + std::abs(prev)) &&
        g.lpNorm<Eigen::Infinity>() <= 1e3 * options.gradient_tol * (1.0 + std::abs(res.value))) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace fts::optimize
