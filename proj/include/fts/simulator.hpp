#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fts/argarch.hpp"
#include "fts/panel.hpp"
#include "fts/spline_basis.hpp"

namespace fts {

struct SimulationConfig {
  Domain domain = kDefaultDomain;
  int n_interior_lon = kDefaultInteriorKnots;
  int n_interior_lat = kDefaultInteriorKnots;
  int K_true = 5;
  /// One entry per planted factor, or a single entry shared by all.
  std::vector<garch::Params> garch{{0.65, 13.50, 0.09, 0.89, 8.33}};
  /// Planted orthonormal loadings (splines x K_true); random when empty.
  Eigen::MatrixXd loadings;
  double sigma = 1.0;  // white noise SD, deg F
  /// Fixed city locations; otherwise n_cities drawn uniformly from the
  /// domain shrunk by `inset` degrees on each side.
  std::vector<Location> locations;
  int n_cities = 111;
  double inset = 1.0;
  int T = 1000;
  double missing_rate = 0.0;
  std::uint64_t seed = 1;
  double mean_offset = -1.17;
  /// Scale of the random planted mean-surface coefficients.
  double mean_amplitude = 1.0;
  int horizon = 6;
  std::string start_date = "2014-07-01";
};

struct SimulatedPanel {
  ObservationPanel panel;
  Eigen::MatrixXd beta;      // T x K_true
  Eigen::MatrixXd loadings;  // splines x K_true
  Eigen::VectorXd mean_coeffs;
  double mean_offset = 0.0;
  /// Noise-free, mask-free Y_t(tau_i) - eps, for checks.
  Eigen::MatrixXd signal;
};

/// Validates and fills defaults (throws InvalidConfig).
void validate(const SimulationConfig& config);

/// Y_t(tau) = mu(tau) + sum_k beta_kt phi_k(tau) + eps_t(tau).
/// Coefficient paths, noise and masking, and geometry (cities, loadings, mean)
/// draw from separate seeded streams, so changing sigma or the missing rate
/// leaves the coefficient paths untouched.
SimulatedPanel simulate_panel(const SimulationConfig& config);

/// Draws an orthonormal rows x cols matrix (QR of a Gaussian matrix).
Eigen::MatrixXd random_orthonormal(int rows, int cols, std::uint64_t seed);

}  // namespace fts
