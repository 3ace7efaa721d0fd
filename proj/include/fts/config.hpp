#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "json.hpp"

#include "fts/diagnostics.hpp"
#include "fts/predict.hpp"
#include "fts/simulator.hpp"
#include "fts/spline_basis.hpp"
#include "fts/surface_fit.hpp"

namespace fts {

struct PipelineConfig {
  int horizon = 6;
  Domain domain = kDefaultDomain;
  int n_interior_lon = kDefaultInteriorKnots;
  int n_interior_lat = kDefaultInteriorKnots;
  double svd_rtol = 1e-8;
  int min_obs_per_day = 10;
  int K = 20;
  std::uint64_t garch_seed = 0;
  int garch_random_starts = 0;
  EvaluationMode mode = EvaluationMode::Filtered;
  int walkforward_refit_interval = 30;
  int walkforward_min_history = 100;
  Completeness completeness = Completeness::Pairwise;
  int min_pair_days = 30;
  std::string input_path;
  std::string output_path;

  SplineBasis splines() const { return SplineBasis(domain, n_interior_lon, n_interior_lat); }
  SurfaceFitOptions surface_options() const { return {svd_rtol, min_obs_per_day}; }
  garch::FitOptions garch_options() const;
  WalkForwardOptions walkforward_options() const;
  CorrelationOptions correlation_options() const { return {completeness, min_pair_days}; }

  /// Throws InvalidConfig when a field is out of range.
  void validate() const;
};

/// Reads a config object; unknown keys and wrong types raise InvalidConfig.
PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig base = {});
nlohmann::json to_json(const PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Applies FTS_HORIZON, FTS_K, FTS_MODE, FTS_SEED, FTS_SVD_RTOL and
/// FTS_MIN_OBS_PER_DAY when present.
void apply_env(PipelineConfig& config, const EnvLookup& lookup);
EnvLookup process_env();

EvaluationMode parse_mode(const std::string& text);
std::string to_string(EvaluationMode mode);

SimulationConfig simulation_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimulationConfig& config);

}  // namespace fts
