#include "fts/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fts/coefficients.hpp"
#include "fts/error.hpp"

namespace fts {

Eigen::MatrixXd SpatialCorrelation::ordered() const {
  const auto n = static_cast<Eigen::Index>(order.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      out(a, b) = values(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]);
  return out;
}

SpatialCorrelation spatial_correlation(const Eigen::Ref<const Eigen::MatrixXd>& series,
                                       std::span<const Location> locations,
                                       CorrelationKind kind, const CorrelationOptions& options) {
  const Eigen::Index T = series.rows();
  const Eigen::Index n = series.cols();
  if (static_cast<std::size_t>(n) != locations.size())
    throw Error(ErrorCode::AlignmentMismatch, "series columns and locations differ");

  SpatialCorrelation out;
  out.kind = kind;
  out.order.resize(static_cast<std::size_t>(n));
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) {
    return locations[static_cast<std::size_t>(a)].lon > locations[static_cast<std::size_t>(b)].lon;
  });

  std::vector<bool> complete(static_cast<std::size_t>(T), true);
  if (options.completeness == Completeness::Global)
    for (Eigen::Index t = 0; t < T; ++t)
      for (Eigen::Index i = 0; i < n; ++i)
        if (is_missing(series(t, i))) complete[static_cast<std::size_t>(t)] = false;

  out.values = Eigen::MatrixXd::Constant(n, n, kMissing);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double si = 0.0, sj = 0.0;
      long count = 0;
      for (Eigen::Index t = 0; t < T; ++t) {
        if (!complete[static_cast<std::size_t>(t)]) continue;
        const double a = series(t, i), b = series(t, j);
        if (is_missing(a) || is_missing(b)) continue;
        si += a;
        sj += b;
        ++count;
      }
      if (count < std::max(options.min_days, 3)) continue;
      const double mi = si / static_cast<double>(count), mj = sj / static_cast<double>(count);
      double sij = 0.0, sii = 0.0, sjj = 0.0;
      for (Eigen::Index t = 0; t < T; ++t) {
        if (!complete[static_cast<std::size_t>(t)]) continue;
        const double a = series(t, i), b = series(t, j);
        if (is_missing(a) || is_missing(b)) continue;
        sij += (a - mi) * (b - mj);
        sii += (a - mi) * (a - mi);
        sjj += (b - mj) * (b - mj);
      }
      if (!(sii > 0.0 && sjj > 0.0)) continue;
      const double r = i == j ? 1.0 : std::clamp(sij / std::sqrt(sii * sjj), -1.0, 1.0);
      out.values(i, j) = out.values(j, i) = r;
    }
  }
  return out;
}

double great_circle_km(const Location& a, const Location& b) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * rad;
  const double dlon = (b.lon - a.lon) * rad;
  const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(a.lat * rad) * std::cos(b.lat * rad) * std::sin(dlon / 2) *
                       std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

std::vector<CorrelogramPoint> correlogram(const SpatialCorrelation& corr,
                                          std::span<const Location> locations) {
  std::vector<CorrelogramPoint> out;
  const auto n = static_cast<int>(locations.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double r = corr.values(i, j);
      if (is_missing(r)) continue;
      out.push_back({i, j,
                     great_circle_km(locations[static_cast<std::size_t>(i)],
                                     locations[static_cast<std::size_t>(j)]),
                     r});
    }
  return out;
}

double squared_frobenius(const SpatialCorrelation& corr, const SpatialCorrelation& mask) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < corr.values.rows(); ++i)
    for (Eigen::Index j = 0; j < corr.values.cols(); ++j) {
      const double r = corr.values(i, j);
      if (is_missing(r) || is_missing(mask.values(i, j))) continue;
      sum += r * r;
    }
  return sum;
}

std::vector<FrobeniusPoint> frobenius_curve(const ObservationPanel& panel,
                                            const SplineBasis& splines, const MeanField& mean,
                                            const PrincipalComponents& pcs,
                                            std::span<const int> K_values, int min_obs_per_day,
                                            const CorrelationOptions& options) {
  for (int K : K_values)
    if (K < 0 || K > pcs.max_components())
      throw Error(ErrorCode::KOutOfRange, "K = " + std::to_string(K) + " outside [0, " +
                                              std::to_string(pcs.max_components()) + "]");
  const auto before =
      spatial_correlation(panel.errors, panel.locations, CorrelationKind::Before, options);
  std::vector<FrobeniusPoint> out;
  out.reserve(K_values.size());
  for (int K : K_values) {
    const auto basis = truncate(splines, mean, pcs, K);
    const auto proj = project_all(basis, panel, min_obs_per_day);
    const auto after = spatial_correlation(proj.residuals.values, panel.locations,
                                           CorrelationKind::After, options);
    out.push_back({K, squared_frobenius(after, before)});
  }
  return out;
}

}  // namespace fts
