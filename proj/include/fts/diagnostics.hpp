#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "fts/panel.hpp"
#include "fts/spatial_basis.hpp"

namespace fts {

enum class Completeness {
  Pairwise,  // days on which both cities are observed
  Global,    // days on which every city is observed
};

enum class CorrelationKind { Before, After };

struct CorrelationOptions {
  Completeness completeness = Completeness::Pairwise;
  int min_days = 30;
};

/// Pairwise Pearson correlation between city columns. Stored in input city
/// order; `order` lists city indices from east to west (descending
/// longitude). Entries with too few common days are NaN.
struct SpatialCorrelation {
  Eigen::MatrixXd values;
  std::vector<int> order;
  CorrelationKind kind = CorrelationKind::Before;

  /// Matrix permuted into east-to-west order.
  Eigen::MatrixXd ordered() const;
};

SpatialCorrelation spatial_correlation(const Eigen::Ref<const Eigen::MatrixXd>& series,
                                       std::span<const Location> locations,
                                       CorrelationKind kind = CorrelationKind::Before,
                                       const CorrelationOptions& options = {});

inline constexpr double kEarthRadiusKm = 6371.0;

/// Haversine great-circle distance in km.
double great_circle_km(const Location& a, const Location& b);

struct CorrelogramPoint {
  int i = 0;
  int j = 0;
  double distance_km = 0.0;
  double correlation = 0.0;
};

/// One point per unordered city pair with a defined correlation.
std::vector<CorrelogramPoint> correlogram(const SpatialCorrelation& corr,
                                          std::span<const Location> locations);

struct FrobeniusPoint {
  int K = 0;
  double sum_squared = 0.0;
};

/// For each K, residuals from the top-K basis (via project_all) and the sum of
/// squared residual correlations, diagonal included. Pairs undefined in the
/// raw-panel correlation are excluded at every K.
std::vector<FrobeniusPoint> frobenius_curve(const ObservationPanel& panel,
                                            const SplineBasis& splines, const MeanField& mean,
                                            const PrincipalComponents& pcs,
                                            std::span<const int> K_values,
                                            int min_obs_per_day = 10,
                                            const CorrelationOptions& options = {});

/// Sum of squared defined entries, restricted to entries defined in `mask`.
double squared_frobenius(const SpatialCorrelation& corr, const SpatialCorrelation& mask);

}  // namespace fts
