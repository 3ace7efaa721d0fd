#include "fts/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <Eigen/QR>

#include "fts/dates.hpp"
#include "fts/error.hpp"

namespace fts {

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

enum Stream : std::uint32_t { kGeometry = 1, kNoise = 2, kCoefficients = 100 };

// Smooth seasonal temperature used as the verifying observation.
double synthetic_actual(int day, const Location& loc) {
  return 75.0 - 0.8 * (loc.lat - 37.0) +
         18.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(day) / 365.25);
}

}  // namespace

void validate(const SimulationConfig& c) {
  if (c.K_true < 1) throw Error(ErrorCode::InvalidConfig, "K_true must be >= 1");
  if (c.garch.size() != 1 && static_cast<int>(c.garch.size()) != c.K_true)
    throw Error(ErrorCode::InvalidConfig, "garch needs one entry or K_true entries");
  for (const auto& p : c.garch) p.validate();
  if (!(c.sigma >= 0.0)) throw Error(ErrorCode::InvalidConfig, "sigma must be >= 0");
  if (!(c.missing_rate >= 0.0 && c.missing_rate < 1.0))
    throw Error(ErrorCode::InvalidConfig, "missing_rate must lie in [0, 1)");
  if (c.T < 1) throw Error(ErrorCode::InvalidConfig, "T must be >= 1");
  if (c.locations.empty() && c.n_cities < 1)
    throw Error(ErrorCode::InvalidConfig, "n_cities must be >= 1");
  if (c.horizon < 0 || c.horizon > 6) throw Error(ErrorCode::InvalidConfig, "horizon must be 0..6");
  if (!(2.0 * c.inset < c.domain.lon_max - c.domain.lon_min &&
        2.0 * c.inset < c.domain.lat_max - c.domain.lat_min && c.inset >= 0.0))
    throw Error(ErrorCode::InvalidConfig, "inset leaves no room inside the domain");
  for (const auto& l : c.locations)
    if (!c.domain.contains(l.lon, l.lat))
      throw Error(ErrorCode::InvalidConfig, "location " + l.id + " outside the domain");
  const int splines = (c.n_interior_lon + 4) * (c.n_interior_lat + 4);
  if (c.loadings.size() > 0) {
    if (c.loadings.rows() != splines || c.loadings.cols() != c.K_true)
      throw Error(ErrorCode::InvalidConfig, "planted loadings must be splines x K_true");
    const Eigen::MatrixXd gram = c.loadings.transpose() * c.loadings;
    if (!gram.isIdentity(1e-8))
      throw Error(ErrorCode::InvalidConfig, "planted loadings must be orthonormal");
  } else if (c.K_true > splines) {
    throw Error(ErrorCode::InvalidConfig, "K_true exceeds the number of splines");
  }
}

Eigen::MatrixXd random_orthonormal(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd G(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) G(r, c) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  // Fix signs against R's diagonal so the draw is unique given G.
  const Eigen::MatrixXd R = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int c = 0; c < cols; ++c)
    if (R(c, c) < 0.0) Q.col(c) *= -1.0;
  return Q;
}

SimulatedPanel simulate_panel(const SimulationConfig& config) {
  validate(config);
  const SplineBasis splines(config.domain, config.n_interior_lon, config.n_interior_lat);
  const int P = splines.size();

  std::mt19937_64 geo(derive_seed(config.seed, kGeometry));
  std::vector<Location> locations = config.locations;
  if (locations.empty()) {
    std::uniform_real_distribution<double> ulon(config.domain.lon_min + config.inset,
                                                config.domain.lon_max - config.inset);
    std::uniform_real_distribution<double> ulat(config.domain.lat_min + config.inset,
                                                config.domain.lat_max - config.inset);
    for (int i = 0; i < config.n_cities; ++i) {
      char id[16], name[24];
      std::snprintf(id, sizeof id, "S%03d", i + 1);
      std::snprintf(name, sizeof name, "sim-city-%03d", i + 1);
      const double lon = ulon(geo);
      const double lat = ulat(geo);
      locations.push_back({id, name, lon, lat});
    }
  }

  SimulatedPanel out;
  out.loadings = config.loadings.size() > 0
                     ? config.loadings
                     : random_orthonormal(P, config.K_true, geo());
  std::normal_distribution<double> normal;
  out.mean_coeffs.resize(P);
  for (int j = 0; j < P; ++j) out.mean_coeffs(j) = config.mean_amplitude * normal(geo);
  out.mean_offset = config.mean_offset;

  out.beta.resize(config.T, config.K_true);
  for (int k = 0; k < config.K_true; ++k) {
    const auto& p = config.garch.size() == 1 ? config.garch.front()
                                             : config.garch[static_cast<std::size_t>(k)];
    out.beta.col(k) =
        garch::simulate(p, config.T, derive_seed(config.seed, kCoefficients + static_cast<std::uint32_t>(k))).beta;
  }

  const auto n = static_cast<Eigen::Index>(locations.size());
  Eigen::MatrixXd phi(n, config.K_true);
  Eigen::VectorXd mu(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& l = locations[static_cast<std::size_t>(i)];
    const auto s = splines.eval_dense(l.lon, l.lat);
    phi.row(i) = (out.loadings.transpose() * s).transpose();
    mu(i) = config.mean_offset + out.mean_coeffs.dot(s);
  }
  out.signal = (out.beta * phi.transpose()).rowwise() + mu.transpose();

  std::mt19937_64 noise(derive_seed(config.seed, kNoise));
  std::bernoulli_distribution drop(config.missing_rate);
  auto& panel = out.panel;
  panel.horizon = config.horizon;
  panel.locations = locations;
  panel.errors.resize(config.T, n);
  panel.forecasts.resize(config.T, n);
  panel.actuals.resize(config.T, n);
  for (int t = 0; t < config.T; ++t) {
    panel.dates.push_back(add_days(config.start_date, t));
    for (Eigen::Index i = 0; i < n; ++i) {
      // Draw both variates unconditionally so the stream layout is fixed.
      const double eps = config.sigma * normal(noise);
      const bool missing = drop(noise);
      const double A = synthetic_actual(t, locations[static_cast<std::size_t>(i)]);
      const double F = A + out.signal(t, i) + eps;
      if (missing) {
        panel.forecasts(t, i) = panel.actuals(t, i) = panel.errors(t, i) = kMissing;
      } else {
        panel.forecasts(t, i) = F;
        panel.actuals(t, i) = A;
        panel.errors(t, i) = F - A;
      }
    }
  }
  return out;
}

}  // namespace fts
