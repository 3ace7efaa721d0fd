#include "fts/surface_fit.hpp"

#include <algorithm>
#include <string>

#include <Eigen/SVD>

#include "fts/error.hpp"

namespace fts {

TruncatedSolution truncated_lstsq(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                  const Eigen::Ref<const Eigen::VectorXd>& y, double rtol,
                                  int max_rank) {
  TruncatedSolution out;
  out.x = Eigen::VectorXd::Zero(A.cols());
  if (A.rows() == 0 || A.cols() == 0) {
    out.residual_norm = y.norm();
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.singular_values = svd.singularValues();
  const auto& s = out.singular_values;
  const double cutoff = rtol * s(0);
  int rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  if (max_rank >= 0) rank = std::min(rank, max_rank);
  out.rank = rank;
  if (rank > 0) {
    const Eigen::VectorXd proj = svd.matrixU().leftCols(rank).transpose() * y;
    out.x = svd.matrixV().leftCols(rank) * (proj.array() / s.head(rank).array()).matrix();
  }
  out.residual_norm = (A * out.x - y).norm();
  return out;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> design_matrix(const SplineBasis& basis,
                                                          std::span<const Location> locations) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(locations.size() * 16);
  for (std::size_t i = 0; i < locations.size(); ++i) {
    basis.for_each_nonzero(locations[i].lon, locations[i].lat, [&](int j, double v) {
      triplets.emplace_back(static_cast<int>(i), j, v);
    });
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> S(static_cast<Eigen::Index>(locations.size()),
                                                 basis.size());
  S.setFromTriplets(triplets.begin(), triplets.end());
  return S;
}

DayFit fit_day(const SplineBasis& basis, std::span<const Location> locations,
               const Eigen::Ref<const Eigen::VectorXd>& day_errors,
               const SurfaceFitOptions& options, int max_rank) {
  if (static_cast<std::size_t>(day_errors.size()) != locations.size())
    throw Error(ErrorCode::AlignmentMismatch, "day errors and locations differ in length");
  const auto obs = observed_indices(day_errors);
  const int n = static_cast<int>(obs.size());
  if (n < options.min_obs_per_day || n == 0) {
    throw Error(ErrorCode::InsufficientObservations,
                std::to_string(n) + " observations, need " +
                    std::to_string(std::max(options.min_obs_per_day, 1)));
  }
  std::vector<Location> at;
  at.reserve(obs.size());
  Eigen::VectorXd y(n);
  for (int r = 0; r < n; ++r) {
    at.push_back(locations[static_cast<std::size_t>(obs[static_cast<std::size_t>(r)])]);
    y(r) = day_errors(obs[static_cast<std::size_t>(r)]);
  }
  if (n > 1 && std::all_of(at.begin(), at.end(), [&](const Location& l) {
        return l.lon == at.front().lon && l.lat == at.front().lat;
      })) {
    throw Error(ErrorCode::DegenerateDesign, "all observations share one location");
  }

  const auto S = design_matrix(basis, at);

  // Compress to the columns touched by some observation.
  std::vector<int> active;
  std::vector<int> position(static_cast<std::size_t>(basis.size()), -1);
  for (int r = 0; r < S.outerSize(); ++r) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(S, r); it; ++it) {
      const auto col = static_cast<std::size_t>(it.col());
      if (position[col] < 0) {
        position[col] = 0;
        active.push_back(static_cast<int>(col));
      }
    }
  }
  std::sort(active.begin(), active.end());
  for (std::size_t c = 0; c < active.size(); ++c)
    position[static_cast<std::size_t>(active[c])] = static_cast<int>(c);

  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(active.size()));
  for (int r = 0; r < S.outerSize(); ++r) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(S, r); it; ++it)
      dense(r, position[static_cast<std::size_t>(it.col())]) = it.value();
  }

  const auto sol = truncated_lstsq(dense, y, options.svd_rtol, max_rank);
  DayFit fit;
  fit.coeffs = Eigen::VectorXd::Zero(basis.size());
  for (std::size_t c = 0; c < active.size(); ++c)
    fit.coeffs(active[c]) = sol.x(static_cast<Eigen::Index>(c));
  fit.rank = sol.rank;
  fit.residual_norm = sol.residual_norm;
  return fit;
}

double grand_mean(const ObservationPanel& panel) {
  double sum = 0.0;
  long count = 0;
  for (Eigen::Index t = 0; t < panel.errors.rows(); ++t) {
    for (Eigen::Index i = 0; i < panel.errors.cols(); ++i) {
      const double v = panel.errors(t, i);
      if (is_missing(v)) continue;
      sum += v;
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::EmptyInput, "panel has no observed entries");
  return sum / static_cast<double>(count);
}

CoefficientMatrix fit_all_days(const SplineBasis& basis, const ObservationPanel& panel,
                               const SurfaceFitOptions& options) {
  if (panel.num_days() == 0) throw Error(ErrorCode::EmptyInput, "panel has no days");
  CoefficientMatrix out;
  out.centering = grand_mean(panel);

  std::vector<Eigen::VectorXd> rows;
  for (int t = 0; t < panel.num_days(); ++t) {
    const Eigen::VectorXd centered = panel.errors.row(t).transpose().array() - out.centering;
    try {
      auto fit = fit_day(basis, panel.locations, centered, options);
      rows.push_back(std::move(fit.coeffs));
      out.days.push_back(t);
      out.residual_norms.push_back(fit.residual_norm);
      out.ranks.push_back(fit.rank);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientObservations &&
          e.code() != ErrorCode::DegenerateDesign)
        throw;
      out.skipped.push_back({t, std::string(to_string(e.code())) + ": " + e.what()});
    }
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyOutput, "no day passed the observation threshold");
  out.values.resize(static_cast<Eigen::Index>(rows.size()), basis.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    out.values.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  return out;
}

MeanField estimate_mean(const ObservationPanel& panel, const CoefficientMatrix& coeffs) {
  if (coeffs.rows() == 0) throw Error(ErrorCode::EmptyInput, "coefficient matrix is empty");
  MeanField mean;
  mean.grand_mean = grand_mean(panel);
  mean.mean_coeffs = coeffs.values.colwise().mean().transpose();
  return mean;
}

}  // namespace fts
