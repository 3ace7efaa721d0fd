#pragma once

#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fts/dates.hpp"
#include "fts/panel.hpp"
#include "fts/spline_basis.hpp"

namespace fts::testing {

inline std::vector<Location> random_locations(int n, std::mt19937_64& rng,
                                              const Domain& d = kDefaultDomain) {
  std::uniform_real_distribution<double> lon(d.lon_min, d.lon_max), lat(d.lat_min, d.lat_max);
  std::vector<Location> out;
  for (int i = 0; i < n; ++i) {
    const std::string id = "C" + std::to_string(i);
    out.push_back({id, id, lon(rng), lat(rng)});
  }
  return out;
}

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = z(rng);
  return m;
}

inline ObservationPanel panel_from_errors(const Eigen::MatrixXd& errors,
                                          std::vector<Location> locations, int horizon = 6) {
  ObservationPanel p;
  p.locations = std::move(locations);
  p.errors = errors;
  p.horizon = horizon;
  for (Eigen::Index t = 0; t < errors.rows(); ++t)
    p.dates.push_back(add_days("2015-01-01", static_cast<int>(t)));
  return p;
}

}  // namespace fts::testing
