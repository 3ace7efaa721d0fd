#include "fts/spatial_basis.hpp"

#include <algorithm>
#include <string>

#include <Eigen/SVD>

#include "fts/error.hpp"

namespace fts {

PrincipalComponents decompose(const CoefficientMatrix& coeffs, const MeanField& mean) {
  if (coeffs.rows() == 0) throw Error(ErrorCode::EmptyInput, "coefficient matrix is empty");
  const Eigen::MatrixXd centered = coeffs.values.rowwise() - mean.mean_coeffs.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);

  PrincipalComponents pcs;
  pcs.singular_values = svd.singularValues();
  pcs.loadings = svd.matrixV();
  for (Eigen::Index k = 0; k < pcs.loadings.cols(); ++k) {
    Eigen::Index arg = 0;
    pcs.loadings.col(k).cwiseAbs().maxCoeff(&arg);
    if (pcs.loadings(arg, k) < 0.0) pcs.loadings.col(k) *= -1.0;
  }
  const double total = pcs.singular_values.squaredNorm();
  pcs.explained_variance = total > 0.0
                               ? Eigen::VectorXd(pcs.singular_values.array().square() / total)
                               : Eigen::VectorXd::Zero(pcs.singular_values.size());
  return pcs;
}

SpatialBasis::SpatialBasis(SplineBasis splines, MeanField mean, Eigen::MatrixXd loadings,
                           Eigen::VectorXd singular_values, Eigen::VectorXd explained_variance)
    : splines_(std::move(splines)),
      mean_(std::move(mean)),
      loadings_(std::move(loadings)),
      singular_values_(std::move(singular_values)),
      explained_variance_(std::move(explained_variance)) {
  if (loadings_.rows() != splines_.size())
    throw Error(ErrorCode::ArtifactMismatch, "loading rows do not match the spline count");
  if (mean_.mean_coeffs.size() != splines_.size())
    throw Error(ErrorCode::ArtifactMismatch, "mean coefficients do not match the spline count");
}

Eigen::VectorXd SpatialBasis::eval(double lon, double lat) const {
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(K());
  splines_.for_each_nonzero(lon, lat, [&](int j, double v) {
    phi += v * loadings_.row(j).transpose();
  });
  return phi;
}

Eigen::MatrixXd SpatialBasis::eval_at(std::span<const Location> locations) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(locations.size()), K());
  for (std::size_t i = 0; i < locations.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = eval(locations[i].lon, locations[i].lat).transpose();
  return out;
}

Eigen::VectorXd SpatialBasis::mean_at(std::span<const Location> locations) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(locations.size()));
  for (std::size_t i = 0; i < locations.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = eval_mean(locations[i].lon, locations[i].lat);
  return out;
}

SpatialBasis SpatialBasis::leading(int k) const {
  if (k < 0 || k > K()) throw Error(ErrorCode::KOutOfRange, "k outside [0, K]");
  return SpatialBasis(splines_, mean_, loadings_.leftCols(k), singular_values_,
                      explained_variance_);
}

SpatialBasis truncate(const SplineBasis& splines, const MeanField& mean,
                      const PrincipalComponents& pcs, int K) {
  if (K < 0 || K > pcs.max_components())
    throw Error(ErrorCode::KOutOfRange, "K = " + std::to_string(K) + " outside [0, " +
                                            std::to_string(pcs.max_components()) + "]");
  return SpatialBasis(splines, mean, pcs.loadings.leftCols(K), pcs.singular_values,
                      pcs.explained_variance);
}

SpatialBasis build_basis(const SplineBasis& splines, const CoefficientMatrix& coeffs,
                         const MeanField& mean, int K) {
  const int limit = std::min(coeffs.rows(), splines.size());
  if (K < 1 || K > limit)
    throw Error(ErrorCode::KOutOfRange,
                "K = " + std::to_string(K) + " outside [1, " + std::to_string(limit) + "]");
  return truncate(splines, mean, decompose(coeffs, mean), K);
}

BasisGrid export_basis_grid(const SpatialBasis& basis, int k, int n_lon, int n_lat) {
  if (k < 0 || k > basis.K())
    throw Error(ErrorCode::KOutOfRange, "component " + std::to_string(k) + " outside [0, " +
                                            std::to_string(basis.K()) + "]");
  if (n_lon < 2 || n_lat < 2) throw Error(ErrorCode::InvalidRange, "grid resolution must be >= 2");
  const auto dom = basis.splines().domain();
  BasisGrid grid;
  grid.lon_axis = Eigen::VectorXd::LinSpaced(n_lon, dom.lon_min, dom.lon_max);
  grid.lat_axis = Eigen::VectorXd::LinSpaced(n_lat, dom.lat_min, dom.lat_max);
  // LinSpaced may land a hair off the endpoints.
  grid.lon_axis(n_lon - 1) = dom.lon_max;
  grid.lat_axis(n_lat - 1) = dom.lat_max;
  grid.values.resize(n_lon, n_lat);
  for (int a = 0; a < n_lon; ++a)
    for (int b = 0; b < n_lat; ++b)
      grid.values(a, b) = k == 0 ? basis.eval_mean(grid.lon_axis(a), grid.lat_axis(b))
                                 : basis.splines().evaluate(basis.loadings().col(k - 1),
                                                            grid.lon_axis(a), grid.lat_axis(b));
  return grid;
}

}  // namespace fts
