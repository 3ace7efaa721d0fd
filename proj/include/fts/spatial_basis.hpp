#pragma once

#include <Eigen/Core>

#include "fts/spline_basis.hpp"
#include "fts/surface_fit.hpp"

namespace fts {

/// Full principal-component decomposition of C - C̄, before truncation.
struct PrincipalComponents {
  Eigen::VectorXd singular_values;  // descending
  Eigen::MatrixXd loadings;         // basis.size() x rank, sign-normalised
  Eigen::VectorXd explained_variance;

  int max_components() const { return static_cast<int>(loadings.cols()); }
};

/// Centres the rows of C with the mean field's column means and takes the
/// SVD. Each loading column is flipped so its largest-magnitude entry is
/// positive.
PrincipalComponents decompose(const CoefficientMatrix& coeffs, const MeanField& mean);

/// K leading surfaces phi_k(tau) = sum_j V_jk S_j(tau) plus the mean field.
class SpatialBasis {
 public:
  SpatialBasis(SplineBasis splines, MeanField mean, Eigen::MatrixXd loadings,
               Eigen::VectorXd singular_values, Eigen::VectorXd explained_variance);

  const SplineBasis& splines() const { return splines_; }
  const MeanField& mean() const { return mean_; }
  const Eigen::MatrixXd& loadings() const { return loadings_; }
  const Eigen::VectorXd& singular_values() const { return singular_values_; }
  const Eigen::VectorXd& explained_variance() const { return explained_variance_; }
  int K() const { return static_cast<int>(loadings_.cols()); }

  /// Phi(tau) = V_{1..K}^T S(tau).
  Eigen::VectorXd eval(double lon, double lat) const;
  double eval_mean(double lon, double lat) const { return mean_.evaluate(splines_, lon, lat); }

  /// n x K matrix of Phi at the given locations.
  Eigen::MatrixXd eval_at(std::span<const Location> locations) const;
  Eigen::VectorXd mean_at(std::span<const Location> locations) const;

  /// Copy restricted to the first k components; k == 0 keeps only the mean.
  SpatialBasis leading(int k) const;

 private:
  SplineBasis splines_;
  MeanField mean_;
  Eigen::MatrixXd loadings_;
  Eigen::VectorXd singular_values_;
  Eigen::VectorXd explained_variance_;
};

SpatialBasis truncate(const SplineBasis& splines, const MeanField& mean,
                      const PrincipalComponents& pcs, int K);

/// Requires 1 <= K <= min(rows of C, number of splines).
SpatialBasis build_basis(const SplineBasis& splines, const CoefficientMatrix& coeffs,
                         const MeanField& mean, int K);

/// phi_k sampled on a regular grid covering the spline domain.
/// values(a, b) = phi_k(lon_axis(a), lat_axis(b)).
struct BasisGrid {
  Eigen::VectorXd lon_axis;
  Eigen::VectorXd lat_axis;
  Eigen::MatrixXd values;
};

/// k is one based (1 <= k <= K); k = 0 gives the mean field. Each
/// resolution must be at least 2.
BasisGrid export_basis_grid(const SpatialBasis& basis, int k, int n_lon, int n_lat);

}  // namespace fts
