// ftsc: command-line driver for the forecast-error model.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fts/config.hpp"
#include "fts/csv.hpp"
#include "fts/error.hpp"
#include "fts/io.hpp"
#include "fts/pipeline.hpp"
#include "fts/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormats = R"(Input table (fit, adjust, diagnose, predict --recent):
  date,city_id,city_name,longitude,latitude,horizon_days,forecast_F,actual_F
  ISO dates; empty forecast_F or actual_F marks the entry missing.

Outputs:
  fit          <out>/manifest.json plus CSV tables (see README)
  predict      <out>/prediction.csv  date,city_id,longitude,latitude,Y_hat,predictive_sd
               <out>/coefficients.csv  k,location,scale2,nu,variance
  adjust       <out>/adjusted.csv  date,city_id,F,Y_hat,F_adj,A,Y,Z,predictive_sd
               <out>/summary.json
               <out>/histogram.csv  bin_lower,bin_upper,count_Y,count_Z
  diagnose     <out>/correlation_before.csv, correlation_after.csv
                 city_id,<city ids east to west>
               <out>/correlogram_before.csv, correlogram_after.csv
                 distance_km,correlation,city_i,city_j
               <out>/frobenius.csv  K,sum_squared_correlation
  simulate     <out>/panel.csv (input table layout)
               <out>/truth_beta.csv  date,beta_1..beta_K
               <out>/truth_loadings.csv  j,phi_1..phi_K
               <out>/simulation.json
  export-basis <out>/basis_<k>.csv and <out>/mean.csv  lon,lat,value

Environment overrides (applied after --config, before flags):
  FTS_HORIZON FTS_K FTS_MODE FTS_SEED FTS_SVD_RTOL FTS_MIN_OBS_PER_DAY

Errors are printed to stderr as one JSON object {"error","message","command"}.
)";

struct Options {
  std::string config_path;
  std::optional<int> horizon;
  std::optional<int> K;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string input;
  std::string model;
  std::string recent;
  int resolution = 100;
  int bins = 60;
};

fts::PipelineConfig pipeline_config(const Options& o) {
  fts::PipelineConfig c = o.config_path.empty() ? fts::PipelineConfig{} : fts::load_config(o.config_path);
  fts::apply_env(c, fts::process_env());
  if (o.horizon) c.horizon = *o.horizon;
  if (o.K) c.K = *o.K;
  if (o.mode) c.mode = fts::parse_mode(*o.mode);
  if (o.seed) c.garch_seed = *o.seed;
  c.validate();
  return c;
}

fs::path require_out(const Options& o, const fts::PipelineConfig* c = nullptr) {
  std::string out = o.out;
  if (out.empty() && c) out = c->output_path;
  if (out.empty()) throw fts::Error(fts::ErrorCode::InvalidConfig, "--out is required");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw fts::Error(fts::ErrorCode::Io, "cannot create " + out + ": " + ec.message());
  return out;
}

std::string require_input(const Options& o, const fts::PipelineConfig& c) {
  if (!o.input.empty()) return o.input;
  if (!c.input_path.empty()) return c.input_path;
  throw fts::Error(fts::ErrorCode::InvalidConfig, "an input table is required");
}

fts::ObservationPanel read_panel(const std::string& path, int horizon) {
  fts::IngestReport report;
  auto panel = fts::ingest(fs::path(path), horizon, &report);
  for (const auto& r : report.rejected) std::cerr << "rejected " << r << "\n";
  for (const auto& w : report.warnings) std::cerr << "warning " << w << "\n";
  return panel;
}

fts::ModelArtifact require_model(const Options& o) {
  if (o.model.empty()) throw fts::Error(fts::ErrorCode::InvalidConfig, "--model is required");
  return fts::load_artifact(o.model);
}

void run_fit(const Options& o) {
  const auto c = pipeline_config(o);
  const auto panel = read_panel(require_input(o, c), c.horizon);
  const auto out = require_out(o, &c);
  const auto artifact = fts::fit_model(panel, c);
  fts::save_artifact(out, artifact);
  for (const auto& s : artifact.coeffs.skipped)
    std::cerr << "skipped " << artifact.dates[static_cast<std::size_t>(s.day)] << ": " << s.reason << "\n";
  std::cout << "fitted K=" << artifact.K() << " on " << artifact.beta.rows() << " days, "
            << artifact.locations.size() << " locations -> " << out.string() << "\n";
}

void run_predict(const Options& o) {
  const auto artifact = require_model(o);
  std::optional<fts::ObservationPanel> recent;
  if (!o.recent.empty()) recent = read_panel(o.recent, artifact.config.horizon);
  const auto out = require_out(o);
  const auto p = fts::predict_next(artifact, recent ? &*recent : nullptr);

  std::string s = "date,city_id,longitude,latitude,Y_hat,predictive_sd\n";
  for (std::size_t i = 0; i < p.locations.size(); ++i) {
    const auto& l = p.locations[i];
    const auto r = static_cast<Eigen::Index>(i);
    s += fts::csv::join({p.date, l.id, fts::csv::number(l.lon), fts::csv::number(l.lat),
                         fts::csv::number(p.field.mean(r)), fts::csv::number(p.field.sd(r))}) + "\n";
  }
  fts::csv::write_file_atomic(out / "prediction.csv", s);
  std::string c = "k,location,scale2,nu,variance\n";
  for (std::size_t k = 0; k < p.laws.size(); ++k) {
    const auto& law = p.laws[k];
    c += std::to_string(k + 1) + "," + fts::csv::number(law.location) + "," +
         fts::csv::number(law.scale2) + "," + fts::csv::number(law.nu) + "," +
         fts::csv::number(law.variance()) + "\n";
  }
  fts::csv::write_file_atomic(out / "coefficients.csv", c);
  std::cout << "predicted " << p.date << " for " << p.locations.size() << " locations\n";
}

void run_adjust(const Options& o) {
  const auto artifact = require_model(o);
  auto c = artifact.config;
  if (o.mode) c.mode = fts::parse_mode(*o.mode);
  else if (const auto env = fts::process_env()("FTS_MODE")) c.mode = fts::parse_mode(*env);
  const auto panel = read_panel(require_input(o, c), artifact.config.horizon);
  const auto out = require_out(o);
  const auto run = fts::run_adjust(artifact, panel, c.mode, c.walkforward_options());
  const auto& adj = run.adjustment;
  if (adj.records.empty())
    throw fts::Error(fts::ErrorCode::EmptyOutput, "no day had both a prediction and an observation");
  fts::csv::write_file_atomic(out / "adjusted.csv", fts::format_adjusted(adj.records));
  const auto summary = fts::format_summary(adj.summary, c.mode, artifact.K());
  fts::csv::write_file_atomic(out / "summary.json", summary);
  fts::csv::write_file_atomic(out / "histogram.csv",
                              fts::format_histogram(fts::error_histograms(adj.records, o.bins)));
  std::cout << summary;
}

void run_diagnose(const Options& o) {
  auto c = pipeline_config(o);
  std::optional<fts::ModelArtifact> artifact;
  if (!o.model.empty()) {
    artifact = fts::load_artifact(o.model);
    c = artifact->config;
  }
  const auto panel = read_panel(require_input(o, c), c.horizon);
  const auto out = require_out(o, &c);
  if (!artifact) artifact = fts::fit_model(panel, c);
  const int max_K = static_cast<int>(artifact->singular_values.size());
  std::vector<int> Ks;
  for (int k = 0; k <= std::min(max_K, artifact->K() + 10); ++k) Ks.push_back(k);
  const auto rep = fts::run_diagnostics(*artifact, panel, Ks);
  fts::csv::write_file_atomic(out / "correlation_before.csv", fts::format_correlation(rep.before, panel.locations));
  fts::csv::write_file_atomic(out / "correlation_after.csv", fts::format_correlation(rep.after, panel.locations));
  fts::csv::write_file_atomic(out / "correlogram_before.csv",
                              fts::format_correlogram(rep.correlogram_before, panel.locations));
  fts::csv::write_file_atomic(out / "correlogram_after.csv",
                              fts::format_correlogram(rep.correlogram_after, panel.locations));
  fts::csv::write_file_atomic(out / "frobenius.csv", fts::format_frobenius(rep.frobenius));
  std::cout << "diagnostics for K=" << artifact->K() << " -> " << out.string() << "\n";
}

void run_simulate(const Options& o) {
  fts::SimulationConfig sc;
  if (!o.config_path.empty())
    sc = fts::simulation_config_from_json(json::parse(fts::csv::read_file(o.config_path)));
  const auto env = fts::process_env();
  if (const auto v = env("FTS_SEED")) sc.seed = std::stoull(*v);
  if (const auto v = env("FTS_HORIZON")) sc.horizon = std::stoi(*v);
  if (const auto v = env("FTS_K")) sc.K_true = std::stoi(*v);
  if (o.seed) sc.seed = *o.seed;
  if (o.horizon) sc.horizon = *o.horizon;
  if (o.K) sc.K_true = *o.K;
  const auto out = require_out(o);
  const auto sim = fts::simulate_panel(sc);

  fts::write_panel(out / "panel.csv", sim.panel);
  std::string b = "date";
  for (Eigen::Index k = 0; k < sim.beta.cols(); ++k) b += ",beta_" + std::to_string(k + 1);
  b += "\n";
  for (Eigen::Index t = 0; t < sim.beta.rows(); ++t) {
    b += sim.panel.dates[static_cast<std::size_t>(t)];
    for (Eigen::Index k = 0; k < sim.beta.cols(); ++k) b += "," + fts::csv::number(sim.beta(t, k));
    b += "\n";
  }
  fts::csv::write_file_atomic(out / "truth_beta.csv", b);
  std::string l = "j";
  for (Eigen::Index k = 0; k < sim.loadings.cols(); ++k) l += ",phi_" + std::to_string(k + 1);
  l += "\n";
  for (Eigen::Index j = 0; j < sim.loadings.rows(); ++j) {
    l += std::to_string(j + 1);
    for (Eigen::Index k = 0; k < sim.loadings.cols(); ++k) l += "," + fts::csv::number(sim.loadings(j, k));
    l += "\n";
  }
  fts::csv::write_file_atomic(out / "truth_loadings.csv", l);
  fts::csv::write_file_atomic(out / "simulation.json", fts::to_json(sc).dump(2) + "\n");
  std::cout << "simulated " << sim.panel.num_days() << " days at " << sim.panel.num_locations()
            << " locations -> " << out.string() << "\n";
}

void run_export_basis(const Options& o) {
  const auto artifact = require_model(o);
  const auto out = require_out(o);
  const auto basis = artifact.basis();
  std::vector<int> ks;
  if (o.K) {
    ks.push_back(*o.K);
  } else {
    for (int k = 1; k <= artifact.K(); ++k) ks.push_back(k);
  }
  for (int k : ks)
    fts::csv::write_file_atomic(out / ("basis_" + std::to_string(k) + ".csv"),
                                fts::format_basis_grid(fts::export_basis_grid(basis, k, o.resolution, o.resolution)));
  fts::csv::write_file_atomic(out / "mean.csv",
                              fts::format_basis_grid(fts::export_basis_grid(basis, 0, o.resolution, o.resolution)));
  std::cout << "exported " << ks.size() << " basis grids -> " << out.string() << "\n";
}

int report(const std::string& command, const std::string& code, const std::string& message, int status) {
  std::cerr << json{{"error", code}, {"message", message}, {"command", command}}.dump() << "\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional time series model of spatial forecast errors"};
  app.footer(kFormats);
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--horizon", o.horizon, "forecast horizon in days (0..6)");
  app.add_option("--k", o.K, "number of spatial basis functions");
  app.add_option("--mode", o.mode, "evaluation mode: filtered | walkforward");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--out", o.out, "output directory");

  auto* fit = app.add_subcommand("fit", "fit the model to a forecast table");
  fit->add_option("input", o.input, "forecast table");
  auto* predict = app.add_subcommand("predict", "predict the error field for the next day");
  predict->add_option("--model", o.model, "model directory")->required();
  predict->add_option("--recent", o.recent, "forecast table with days after the model's last date");
  auto* adjust = app.add_subcommand("adjust", "adjust forecasts with one-step predictions");
  adjust->add_option("input", o.input, "forecast table");
  adjust->add_option("--model", o.model, "model directory")->required();
  adjust->add_option("--bins", o.bins, "histogram bins")->check(CLI::PositiveNumber);
  auto* diagnose = app.add_subcommand("diagnose", "spatial correlation diagnostics");
  diagnose->add_option("input", o.input, "forecast table");
  diagnose->add_option("--model", o.model, "model directory (fit in memory when absent)");
  auto* simulate = app.add_subcommand("simulate", "simulate a synthetic forecast table");
  auto* export_basis = app.add_subcommand("export-basis", "evaluate basis functions on a grid");
  export_basis->add_option("--model", o.model, "model directory")->required();
  export_basis->add_option("--resolution", o.resolution, "grid points per axis")->check(CLI::Range(2, 10000));

  std::string command = "ftsc";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(command, "usage", e.what(), 2);
  }

  try {
    if (*fit) command = "fit", run_fit(o);
    else if (*predict) command = "predict", run_predict(o);
    else if (*adjust) command = "adjust", run_adjust(o);
    else if (*diagnose) command = "diagnose", run_diagnose(o);
    else if (*simulate) command = "simulate", run_simulate(o);
    else if (*export_basis) command = "export-basis", run_export_basis(o);
  } catch (const fts::Error& e) {
    return report(command, std::string(fts::to_string(e.code())), e.what(), 1);
  } catch (const json::exception& e) {
    return report(command, "invalid-config", e.what(), 1);
  } catch (const std::exception& e) {
    return report(command, "internal", e.what(), 1);
  }
  return EXIT_SUCCESS;
}
