#include "fts/predict.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

#include "fts/error.hpp"

namespace fts {

namespace {

void check_dimensions(std::span<const garch::Params> params, const BetaSeries& beta) {
  if (static_cast<int>(params.size()) != beta.K())
    throw Error(ErrorCode::AlignmentMismatch, "one parameter set per component required");
  if (beta.rows() == 0) throw Error(ErrorCode::EmptyInput, "coefficient series is empty");
}

double mean_sd(const std::vector<double>& v, double& sd) {
  if (v.empty()) {
    sd = 0.0;
    return 0.0;
  }
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return mean;
}

}  // namespace

PredictionState initial_state(std::span<const garch::Params> params, const BetaSeries& beta,
                              int rows) {
  check_dimensions(params, beta);
  if (rows < 0) rows = beta.rows();
  PredictionState state;
  state.day = beta.days.front();
  state.coeffs.resize(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto col = beta.values.col(static_cast<Eigen::Index>(k)).head(rows);
    state.coeffs[k] = {col(0), col(0), garch::initial_scale2(params[k], col)};
  }
  return state;
}

PredictionState step(std::span<const garch::Params> params, const PredictionState& state,
                     const Eigen::VectorXd* observed_beta) {
  PredictionState next;
  next.day = state.day + 1;
  next.coeffs.resize(state.coeffs.size());
  for (std::size_t k = 0; k < state.coeffs.size(); ++k) {
    const auto& p = params[k];
    const auto& s = state.coeffs[k];
    auto& n = next.coeffs[k];
    n.scale2 = p.omega + p.alpha * s.innovation * s.innovation + p.gamma * s.scale2;
    if (observed_beta) {
      n.beta = (*observed_beta)(static_cast<Eigen::Index>(k));
      n.innovation = n.beta - p.psi * s.beta;
    } else {
      n.beta = p.psi * s.beta;
      n.innovation = 0.0;
    }
  }
  return next;
}

PredictionState filter_to(std::span<const garch::Params> params, const BetaSeries& beta,
                          int last_day) {
  check_dimensions(params, beta);
  if (last_day < beta.days.front())
    throw Error(ErrorCode::StaleState, "requested day precedes the coefficient series");
  int rows = 0;
  while (rows < beta.rows() && beta.days[static_cast<std::size_t>(rows)] <= last_day) ++rows;
  PredictionState state = initial_state(params, beta, rows);
  std::size_t next_row = 1;
  while (state.day < last_day) {
    Eigen::VectorXd obs;
    const bool have = next_row < static_cast<std::size_t>(rows) &&
                      beta.days[next_row] == state.day + 1;
    if (have) obs = beta.values.row(static_cast<Eigen::Index>(next_row++)).transpose();
    state = step(params, state, have ? &obs : nullptr);
  }
  return state;
}

std::vector<CoefficientLaw> predict_coefficients(std::span<const garch::Params> params,
                                                 const PredictionState& state, int target_day) {
  if (target_day != state.day + 1)
    throw Error(ErrorCode::StaleState, "state is for day " + std::to_string(state.day) +
                                           ", prediction requested for day " +
                                           std::to_string(target_day));
  if (params.size() != state.coeffs.size())
    throw Error(ErrorCode::AlignmentMismatch, "one parameter set per component required");
  std::vector<CoefficientLaw> laws(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& p = params[k];
    const auto& s = state.coeffs[k];
    laws[k] = {p.psi * s.beta, p.omega + p.alpha * s.innovation * s.innovation + p.gamma * s.scale2,
               p.nu};
  }
  return laws;
}

FieldPrediction predict_error_field(const FittedModel& model,
                                    std::span<const CoefficientLaw> laws,
                                    std::span<const Location> locations) {
  if (static_cast<int>(laws.size()) != model.K())
    throw Error(ErrorCode::AlignmentMismatch, "one law per component required");
  Eigen::VectorXd location(model.K()), variance(model.K());
  for (int k = 0; k < model.K(); ++k) {
    location(k) = laws[static_cast<std::size_t>(k)].location;
    variance(k) = laws[static_cast<std::size_t>(k)].variance();
  }
  const Eigen::MatrixXd phi = model.basis.eval_at(locations);
  FieldPrediction out;
  out.mean = model.basis.mean_at(locations) + phi * location;
  out.sd = ((phi.array().square().matrix() * variance).array() + model.sigma2).sqrt();
  return out;
}

double predictive_covariance(const FittedModel& model, std::span<const CoefficientLaw> laws,
                             const Location& a, const Location& b) {
  const Eigen::VectorXd pa = model.basis.eval(a.lon, a.lat);
  const Eigen::VectorXd pb = model.basis.eval(b.lon, b.lat);
  double cov = 0.0;
  for (int k = 0; k < model.K(); ++k) cov += laws[static_cast<std::size_t>(k)].variance() * pa(k) * pb(k);
  if (a.lon == b.lon && a.lat == b.lat) cov += model.sigma2;
  return cov;
}

std::vector<DayPrediction> rolling_predictions(const FittedModel& model, const BetaSeries& beta,
                                               int num_days, std::span<const Location> locations,
                                               EvaluationMode mode,
                                               const WalkForwardOptions& wf) {
  std::vector<DayPrediction> out;
  if (beta.rows() == 0) return out;
  if (beta.K() != model.K())
    throw Error(ErrorCode::AlignmentMismatch, "coefficient series and model disagree on K");
  std::vector<garch::Params> params = model.params;

  auto emit = [&](int day, const PredictionState& state) {
    DayPrediction dp;
    dp.day = day;
    dp.laws = predict_coefficients(params, state, day);
    dp.field = predict_error_field(FittedModel{model.basis, params, model.sigma2}, dp.laws,
                                   locations);
    out.push_back(std::move(dp));
  };

  if (mode == EvaluationMode::Filtered) {
    PredictionState state = initial_state(params, beta);
    std::size_t next_row = 1;
    for (int day = beta.days.front() + 1; day < num_days; ++day) {
      emit(day, state);
      Eigen::VectorXd obs;
      const bool have = next_row < beta.days.size() && beta.days[next_row] == day;
      if (have) obs = beta.values.row(static_cast<Eigen::Index>(next_row++)).transpose();
      state = step(params, state, have ? &obs : nullptr);
    }
    return out;
  }

  const int interval = std::max(1, wf.refit_interval);
  int rows_before = 0;  // coefficient rows with day < current day
  int last_refit = -1;
  PredictionState state;
  for (int day = beta.days.front() + 1; day < num_days; ++day) {
    while (rows_before < beta.rows() && beta.days[static_cast<std::size_t>(rows_before)] < day)
      ++rows_before;
    if (rows_before < std::max(wf.min_history, 20)) continue;
    if (last_refit < 0 || day - last_refit >= interval) {
      for (int k = 0; k < beta.K(); ++k) {
        const Eigen::VectorXd history = beta.values.col(k).head(rows_before);
        params[static_cast<std::size_t>(k)] = garch::fit(history, wf.fit).params;
      }
      BetaSeries past;
      past.values = beta.values.topRows(rows_before);
      past.days.assign(beta.days.begin(), beta.days.begin() + rows_before);
      state = filter_to(params, past, day - 1);
      last_refit = day;
    }
    emit(day, state);
    Eigen::VectorXd obs;
    const bool have = rows_before < beta.rows() &&
                      beta.days[static_cast<std::size_t>(rows_before)] == day;
    if (have) obs = beta.values.row(rows_before).transpose();
    state = step(params, state, have ? &obs : nullptr);
  }
  return out;
}

Adjustment adjust_forecasts(std::span<const DayPrediction> predictions,
                            const ObservationPanel& panel) {
  if (!panel.has_raw())
    throw Error(ErrorCode::AlignmentMismatch, "panel carries no raw forecasts to adjust");
  Adjustment out;
  std::vector<double> raw, adjusted;
  for (const auto& dp : predictions) {
    if (dp.day < 0 || dp.day >= panel.num_days())
      throw Error(ErrorCode::AlignmentMismatch, "prediction day outside the panel");
    if (dp.field.mean.size() != panel.num_locations())
      throw Error(ErrorCode::AlignmentMismatch, "prediction and panel locations differ");
    for (int i = 0; i < panel.num_locations(); ++i) {
      const double F = panel.forecasts(dp.day, i);
      if (is_missing(F)) continue;
      AdjustedForecastRecord rec;
      rec.date = panel.dates[static_cast<std::size_t>(dp.day)];
      rec.city_id = panel.locations[static_cast<std::size_t>(i)].id;
      rec.forecast = F;
      rec.predicted_error = dp.field.mean(i);
      rec.adjusted = F - rec.predicted_error;
      rec.predictive_sd = dp.field.sd(i);
      const double A = panel.actuals(dp.day, i);
      if (!is_missing(A)) {
        rec.actual = A;
        rec.raw_error = F - A;
        rec.adjusted_error = rec.adjusted - A;
        raw.push_back(rec.raw_error);
        adjusted.push_back(rec.adjusted_error);
      }
      out.records.push_back(std::move(rec));
    }
  }
  auto& s = out.summary;
  s.count = static_cast<long>(raw.size());
  s.mean_raw = mean_sd(raw, s.sd_raw);
  s.mean_adjusted = mean_sd(adjusted, s.sd_adjusted);
  s.sd_reduction = s.sd_raw > 0.0 ? 1.0 - s.sd_adjusted / s.sd_raw : 0.0;
  return out;
}

Histogram error_histograms(std::span<const AdjustedForecastRecord> records, int bins) {
  if (bins < 1) throw Error(ErrorCode::InvalidRange, "histogram needs at least one bin");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : records) {
    if (is_missing(r.actual)) continue;
    lo = std::min({lo, r.raw_error, r.adjusted_error});
    hi = std::max({hi, r.raw_error, r.adjusted_error});
  }
  Histogram h;
  if (!(hi >= lo)) {
    lo = -1.0;
    hi = 1.0;
  }
  if (hi == lo) hi = lo + 1.0;
  h.edges = Eigen::VectorXd::LinSpaced(bins + 1, lo, hi);
  h.raw_counts = Eigen::VectorXd::Zero(bins);
  h.adjusted_counts = Eigen::VectorXd::Zero(bins);
  auto bin_of = [&](double v) {
    const int b = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
    return std::clamp(b, 0, bins - 1);
  };
  for (const auto& r : records) {
    if (is_missing(r.actual)) continue;
    h.raw_counts(bin_of(r.raw_error)) += 1.0;
    h.adjusted_counts(bin_of(r.adjusted_error)) += 1.0;
  }
  return h;
}

}  // namespace fts
