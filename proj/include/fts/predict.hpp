#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fts/argarch.hpp"
#include "fts/coefficients.hpp"
#include "fts/panel.hpp"
#include "fts/spatial_basis.hpp"

namespace fts {

/// Everything needed to turn a coefficient state into a predicted error field.
struct FittedModel {
  SpatialBasis basis;
  std::vector<garch::Params> params;  // one per component
  double sigma2 = 0.0;

  int K() const { return basis.K(); }
};

struct CoefficientState {
  double beta = 0.0;
  double innovation = 0.0;
  double scale2 = 0.0;
};

/// Filter state after panel day `day`.
struct PredictionState {
  int day = 0;
  std::vector<CoefficientState> coeffs;
};

/// beta_{k,t+1} | F_t ~ t_nu(location, scale2).
struct CoefficientLaw {
  double location = 0.0;
  double scale2 = 0.0;
  double nu = 0.0;

  double variance() const { return nu / (nu - 2.0) * scale2; }
};

/// State at the first row of the series: beta_1, u_1 = beta_1 and eta_1^2
/// from garch::initial_scale2 over the supplied rows.
PredictionState initial_state(std::span<const garch::Params> params, const BetaSeries& beta,
                              int rows = -1);

/// Advances one day. With an observed coefficient vector this is the GARCH
/// filter update; without one the level moves to its conditional mean and the
/// innovation is taken as zero.
PredictionState step(std::span<const garch::Params> params, const PredictionState& state,
                     const Eigen::VectorXd* observed_beta);

/// Runs the filter over the series up to and including panel day last_day,
/// bridging days that have no coefficient row.
PredictionState filter_to(std::span<const garch::Params> params, const BetaSeries& beta,
                          int last_day);

std::vector<CoefficientLaw> predict_coefficients(std::span<const garch::Params> params,
                                                 const PredictionState& state, int target_day);

struct FieldPrediction {
  Eigen::VectorXd mean;  // Y-hat at each location
  Eigen::VectorXd sd;    // predictive standard deviation
};

FieldPrediction predict_error_field(const FittedModel& model,
                                    std::span<const CoefficientLaw> laws,
                                    std::span<const Location> locations);

/// Conditional covariance of Y at two locations given the laws.
double predictive_covariance(const FittedModel& model, std::span<const CoefficientLaw> laws,
                             const Location& a, const Location& b);

enum class EvaluationMode { Filtered, WalkForward };

struct WalkForwardOptions {
  int refit_interval = 30;
  int min_history = 100;
  garch::FitOptions fit;
};

struct DayPrediction {
  int day = 0;
  std::vector<CoefficientLaw> laws;
  FieldPrediction field;
};

/// One-step predictions for every panel day after the first coefficient row.
/// Filtered mode keeps model.params fixed; walk-forward refits the GARCH
/// parameters every refit_interval days using only earlier rows.
std::vector<DayPrediction> rolling_predictions(const FittedModel& model, const BetaSeries& beta,
                                               int num_days, std::span<const Location> locations,
                                               EvaluationMode mode = EvaluationMode::Filtered,
                                               const WalkForwardOptions& wf = {});

struct AdjustedForecastRecord {
  std::string date;
  std::string city_id;
  double forecast = 0.0;         // F
  double predicted_error = 0.0;  // Y-hat
  double adjusted = 0.0;         // F - Y-hat
  double actual = kMissing;      // A
  double raw_error = kMissing;   // Y = F - A
  double adjusted_error = kMissing;  // Z = F_adj - A
  double predictive_sd = 0.0;
};

struct AdjustmentSummary {
  long count = 0;
  double mean_raw = 0.0;
  double sd_raw = 0.0;
  double mean_adjusted = 0.0;
  double sd_adjusted = 0.0;
  double sd_reduction = 0.0;  // 1 - sd_adjusted / sd_raw
};

struct Adjustment {
  std::vector<AdjustedForecastRecord> records;
  AdjustmentSummary summary;
};

/// Applies F_adj = F - Y-hat wherever a raw forecast exists; the summary is
/// taken over records that also carry an actual.
Adjustment adjust_forecasts(std::span<const DayPrediction> predictions,
                            const ObservationPanel& panel);

struct Histogram {
  Eigen::VectorXd edges;  // bins + 1
  Eigen::VectorXd raw_counts;
  Eigen::VectorXd adjusted_counts;
};

/// Shared-edge histograms of Y and Z over records with actuals.
Histogram error_histograms(std::span<const AdjustedForecastRecord> records, int bins);

}  // namespace fts
