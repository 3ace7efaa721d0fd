#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fts/argarch.hpp"
#include "fts/coefficients.hpp"
#include "fts/config.hpp"
#include "fts/diagnostics.hpp"
#include "fts/panel.hpp"
#include "fts/predict.hpp"
#include "fts/spatial_basis.hpp"
#include "fts/surface_fit.hpp"

namespace fts {

inline constexpr int kArtifactVersion = 1;

/// Everything `fit` produces. Day indices refer to positions in `dates`.
struct ModelArtifact {
  int version = kArtifactVersion;
  PipelineConfig config;
  std::vector<std::string> dates;
  std::vector<Location> locations;
  CoefficientMatrix coeffs;
  MeanField mean;
  Eigen::MatrixXd loadings;
  Eigen::VectorXd singular_values;
  Eigen::VectorXd explained_variance;
  BetaSeries beta;
  std::vector<garch::Fit> fits;
  PredictionState final_state;
  double sigma2 = 0.0;
  std::string fingerprint;

  int K() const { return static_cast<int>(loadings.cols()); }
  SpatialBasis basis() const;
  std::vector<garch::Params> params() const;
  FittedModel model() const;
};

/// Spline fits, mean field, spatial basis, coefficient projection, per-k
/// AR(1)+GARCH(1,1)-t fits and the filter state after the last day.
ModelArtifact fit_model(const ObservationPanel& panel, const PipelineConfig& config);

/// Directory of CSV tables plus manifest.json with shapes and per-file
/// digests. Files are written atomically; identical artifacts produce
/// identical bytes.
void save_artifact(const std::filesystem::path& dir, const ModelArtifact& artifact);
ModelArtifact load_artifact(const std::filesystem::path& dir);

struct AdjustRun {
  ProjectionResult projection;
  std::vector<DayPrediction> predictions;
  Adjustment adjustment;
};

/// Projects the panel onto the model basis, predicts each day one step ahead
/// and adjusts the raw forecasts.
AdjustRun run_adjust(const ModelArtifact& artifact, const ObservationPanel& panel,
                     EvaluationMode mode, const WalkForwardOptions& wf = {});

struct NextDayPrediction {
  std::string date;
  std::vector<Location> locations;
  std::vector<CoefficientLaw> laws;
  FieldPrediction field;
};

/// Prediction for the day after the latest information. Days in `recent`
/// (which must follow the model's last date) update the filter state first.
NextDayPrediction predict_next(const ModelArtifact& artifact,
                               const ObservationPanel* recent = nullptr);

struct DiagnosticsReport {
  SpatialCorrelation before;
  SpatialCorrelation after;
  std::vector<CorrelogramPoint> correlogram_before;
  std::vector<CorrelogramPoint> correlogram_after;
  std::vector<FrobeniusPoint> frobenius;
};

DiagnosticsReport run_diagnostics(const ModelArtifact& artifact, const ObservationPanel& panel,
                                  std::span<const int> K_values);

// Writers for plot-ready CSV output.
std::string format_correlation(const SpatialCorrelation& corr, std::span<const Location> locations);
std::string format_correlogram(const std::vector<CorrelogramPoint>& points,
                               std::span<const Location> locations);
std::string format_frobenius(const std::vector<FrobeniusPoint>& curve);
std::string format_basis_grid(const BasisGrid& grid);
std::string format_adjusted(const std::vector<AdjustedForecastRecord>& records);
std::string format_summary(const AdjustmentSummary& summary, EvaluationMode mode, int K);
std::string format_histogram(const Histogram& h);

}  // namespace fts
