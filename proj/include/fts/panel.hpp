#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fts {

/// Missing entries in every panel-shaped matrix are quiet NaNs.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

struct Location {
  std::string id;
  std::string name;
  double lon = 0.0;
  double lat = 0.0;
};

/// Forecast errors Y = F - A for one horizon, one row per calendar day and
/// one column per location. Rows cover every day between the first and last
/// date, so absent days appear as all-missing rows.
struct ObservationPanel {
  std::vector<std::string> dates;
  std::vector<Location> locations;
  Eigen::MatrixXd errors;
  // Raw forecast and verifying observation; empty (0x0) when the panel was
  // built from errors alone.
  Eigen::MatrixXd forecasts;
  Eigen::MatrixXd actuals;
  int horizon = 0;
  std::vector<std::string> warnings;

  int num_days() const { return static_cast<int>(errors.rows()); }
  int num_locations() const { return static_cast<int>(errors.cols()); }
  bool has_raw() const { return forecasts.size() > 0 && actuals.size() > 0; }

  int observed_count(int day) const {
    int n = 0;
    for (Eigen::Index i = 0; i < errors.cols(); ++i) n += is_missing(errors(day, i)) ? 0 : 1;
    return n;
  }

  int total_observed() const {
    int n = 0;
    for (int t = 0; t < num_days(); ++t) n += observed_count(t);
    return n;
  }
};

/// Indices of the observed entries of one panel row.
inline std::vector<int> observed_indices(const Eigen::Ref<const Eigen::VectorXd>& row) {
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(row.size()));
  for (Eigen::Index i = 0; i < row.size(); ++i)
    if (!is_missing(row(i))) idx.push_back(static_cast<int>(i));
  return idx;
}

}  // namespace fts
