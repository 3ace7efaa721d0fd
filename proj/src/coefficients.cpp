#include "fts/coefficients.hpp"

#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "fts/error.hpp"

namespace fts {

DayProjection project_rows(const Eigen::Ref<const Eigen::MatrixXd>& phi,
                           const Eigen::Ref<const Eigen::VectorXd>& target) {
  DayProjection out;
  const Eigen::Index K = phi.cols();
  if (K == 0) {
    out.beta.resize(0);
    out.residual_norm = target.norm();
    return out;
  }
  if (phi.rows() >= K) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi);
    if (qr.rank() < K)
      throw Error(ErrorCode::RankDeficientDesign, "design rank " + std::to_string(qr.rank()) +
                                                      " below K = " + std::to_string(K));
    out.beta = qr.solve(target);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.beta = svd.solve(target);
    out.min_norm = true;
  }
  out.residual_norm = (target - phi * out.beta).norm();
  return out;
}

DayProjection project_day(const SpatialBasis& basis, std::span<const Location> locations,
                          const Eigen::Ref<const Eigen::VectorXd>& day_errors,
                          int min_obs_per_day) {
  if (static_cast<std::size_t>(day_errors.size()) != locations.size())
    throw Error(ErrorCode::AlignmentMismatch, "day errors and locations differ in length");
  const auto obs = observed_indices(day_errors);
  const int n = static_cast<int>(obs.size());
  if (n < min_obs_per_day || n == 0)
    throw Error(ErrorCode::InsufficientObservations,
                std::to_string(n) + " observations, need " + std::to_string(min_obs_per_day));
  Eigen::MatrixXd phi(n, basis.K());
  Eigen::VectorXd target(n);
  for (int r = 0; r < n; ++r) {
    const auto& loc = locations[static_cast<std::size_t>(obs[static_cast<std::size_t>(r)])];
    phi.row(r) = basis.eval(loc.lon, loc.lat).transpose();
    target(r) = day_errors(obs[static_cast<std::size_t>(r)]) - basis.eval_mean(loc.lon, loc.lat);
  }
  return project_rows(phi, target);
}

ProjectionResult project_all(const SpatialBasis& basis, const ObservationPanel& panel,
                             int min_obs_per_day) {
  const Eigen::MatrixXd phi_all = basis.eval_at(panel.locations);
  const Eigen::VectorXd mu_all = basis.mean_at(panel.locations);

  ProjectionResult out;
  out.residuals.values =
      Eigen::MatrixXd::Constant(panel.num_days(), panel.num_locations(), kMissing);
  std::vector<Eigen::VectorXd> rows;
  for (int t = 0; t < panel.num_days(); ++t) {
    const auto obs = observed_indices(panel.errors.row(t).transpose());
    const int n = static_cast<int>(obs.size());
    if (n < min_obs_per_day || n == 0) {
      out.skipped.push_back({t, "insufficient-observations: " + std::to_string(n)});
      continue;
    }
    Eigen::MatrixXd phi(n, basis.K());
    Eigen::VectorXd target(n);
    for (int r = 0; r < n; ++r) {
      const int i = obs[static_cast<std::size_t>(r)];
      phi.row(r) = phi_all.row(i);
      target(r) = panel.errors(t, i) - mu_all(i);
    }
    DayProjection day;
    try {
      day = project_rows(phi, target);
    } catch (const Error& e) {
      out.skipped.push_back({t, std::string(to_string(e.code())) + ": " + e.what()});
      continue;
    }
    for (int r = 0; r < n; ++r) {
      const int i = obs[static_cast<std::size_t>(r)];
      out.residuals.values(t, i) =
          panel.errors(t, i) - mu_all(i) - phi_all.row(i).dot(day.beta);
    }
    rows.push_back(day.beta);
    out.beta.days.push_back(t);
    out.beta.residual_norms.push_back(day.residual_norm);
    out.beta.min_norm.push_back(day.min_norm);
  }
  out.beta.values.resize(static_cast<Eigen::Index>(rows.size()), basis.K());
  for (std::size_t r = 0; r < rows.size(); ++r)
    out.beta.values.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  out.residuals.sigma2 = masked_variance(out.residuals.values);
  return out;
}

double masked_variance(const Eigen::Ref<const Eigen::MatrixXd>& values) {
  double sum = 0.0;
  long n = 0;
  for (Eigen::Index c = 0; c < values.cols(); ++c)
    for (Eigen::Index r = 0; r < values.rows(); ++r)
      if (!is_missing(values(r, c))) {
        sum += values(r, c);
        ++n;
      }
  if (n < 2) return 0.0;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (Eigen::Index c = 0; c < values.cols(); ++c)
    for (Eigen::Index r = 0; r < values.rows(); ++r)
      if (!is_missing(values(r, c))) ss += (values(r, c) - mean) * (values(r, c) - mean);
  return ss / static_cast<double>(n - 1);
}

}  // namespace fts
