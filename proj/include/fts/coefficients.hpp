#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "fts/panel.hpp"
#include "fts/spatial_basis.hpp"
#include "fts/surface_fit.hpp"

namespace fts {

/// beta_{kt}: row r holds the K coefficients of panel day days[r].
struct BetaSeries {
  Eigen::MatrixXd values;
  std::vector<int> days;
  std::vector<double> residual_norms;
  std::vector<bool> min_norm;  // solved by the SVD fallback (n_t < K)

  int rows() const { return static_cast<int>(values.rows()); }
  int K() const { return static_cast<int>(values.cols()); }
};

/// eps_t(tau_i) = Y_t(tau_i) - mu(tau_i) - Phi(tau_i)^T beta_t on observed
/// entries; NaN elsewhere and on skipped days.
struct ResidualPanel {
  Eigen::MatrixXd values;
  double sigma2 = 0.0;  // sample variance of all residual entries
};

struct DayProjection {
  Eigen::VectorXd beta;
  double residual_norm = 0.0;
  bool min_norm = false;
};

/// Least squares of (y - mu) on the rows of phi. Dense QR when the design has
/// at least K rows; minimal-norm SVD solution otherwise.
DayProjection project_rows(const Eigen::Ref<const Eigen::MatrixXd>& phi,
                           const Eigen::Ref<const Eigen::VectorXd>& target);

DayProjection project_day(const SpatialBasis& basis, std::span<const Location> locations,
                          const Eigen::Ref<const Eigen::VectorXd>& day_errors,
                          int min_obs_per_day = 10);

struct ProjectionResult {
  BetaSeries beta;
  ResidualPanel residuals;
  std::vector<SkippedDay> skipped;
};

ProjectionResult project_all(const SpatialBasis& basis, const ObservationPanel& panel,
                             int min_obs_per_day = 10);

/// Sample variance of the observed entries of a NaN-masked matrix.
double masked_variance(const Eigen::Ref<const Eigen::MatrixXd>& values);

}  // namespace fts
