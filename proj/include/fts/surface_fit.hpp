#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "fts/panel.hpp"
#include "fts/spline_basis.hpp"

namespace fts {

struct SurfaceFitOptions {
  /// Singular values at or below rtol * sigma_max are discarded.
  double svd_rtol = 1e-8;
  int min_obs_per_day = 10;
};

/// Least-squares solution restricted to the leading singular directions.
struct TruncatedSolution {
  Eigen::VectorXd x;
  int rank = 0;
  double residual_norm = 0.0;
  Eigen::VectorXd singular_values;
};

/// Solves min ||A x - y|| over the span of the singular vectors whose
/// singular value exceeds rtol * sigma_max. When max_rank >= 0 the rank is
/// additionally capped at max_rank.
TruncatedSolution truncated_lstsq(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                  const Eigen::Ref<const Eigen::VectorXd>& y,
                                  double rtol, int max_rank = -1);

/// Rows S_j(tau_i) for the given locations; at most 16 nonzeros per row.
Eigen::SparseMatrix<double, Eigen::RowMajor> design_matrix(const SplineBasis& basis,
                                                          std::span<const Location> locations);

struct DayFit {
  Eigen::VectorXd coeffs;
  int rank = 0;
  double residual_norm = 0.0;
};

/// Fits one day's spline surface to the observed (non-NaN) entries of
/// day_errors. Splines whose support holds no observation never enter the
/// solve and come back as exact zeros.
DayFit fit_day(const SplineBasis& basis, std::span<const Location> locations,
               const Eigen::Ref<const Eigen::VectorXd>& day_errors,
               const SurfaceFitOptions& options = {}, int max_rank = -1);

struct SkippedDay {
  int day = 0;
  std::string reason;
};

/// Per-day spline coefficients (matrix C). Row r belongs to panel day days[r].
struct CoefficientMatrix {
  Eigen::MatrixXd values;
  std::vector<int> days;
  std::vector<double> residual_norms;
  std::vector<int> ranks;
  std::vector<SkippedDay> skipped;
  /// Constant subtracted from every observation before fitting.
  double centering = 0.0;

  int rows() const { return static_cast<int>(values.rows()); }
};

/// Mean of all observed panel entries.
double grand_mean(const ObservationPanel& panel);

/// Fits every day of the panel after subtracting the grand mean, so that the
/// column means of C describe the departure of the mean surface from it.
CoefficientMatrix fit_all_days(const SplineBasis& basis, const ObservationPanel& panel,
                               const SurfaceFitOptions& options = {});

struct MeanField {
  double grand_mean = 0.0;
  Eigen::VectorXd mean_coeffs;

  double evaluate(const SplineBasis& basis, double lon, double lat) const {
    return grand_mean + basis.evaluate(mean_coeffs, lon, lat);
  }
};

MeanField estimate_mean(const ObservationPanel& panel, const CoefficientMatrix& coeffs);

}  // namespace fts
