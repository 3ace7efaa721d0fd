#include "fts/pipeline.hpp"

#include <algorithm>
#include <map>

#include "fts/csv.hpp"
#include "fts/dates.hpp"
#include "fts/error.hpp"
#include "fts/io.hpp"

namespace fts {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kMinGarchLength = 20;

std::string bool_text(bool b) { return b ? "1" : "0"; }

double cell(const csv::Table& t, std::size_t row, std::size_t col, const std::string& file) {
  if (col >= t.rows[row].size())
    throw Error(ErrorCode::ArtifactMismatch, file + ": short row " + std::to_string(row + 2));
  double v = 0.0;
  if (!csv::parse_number(t.rows[row][col], v, true))
    throw Error(ErrorCode::ArtifactMismatch,
                file + ": bad number '" + t.rows[row][col] + "' on row " + std::to_string(row + 2));
  return v;
}

std::vector<double> knots_json(const Knots& kv) { return kv.knots; }

}  // namespace

SpatialBasis ModelArtifact::basis() const {
  return SpatialBasis(config.splines(), mean, loadings, singular_values, explained_variance);
}

std::vector<garch::Params> ModelArtifact::params() const {
  std::vector<garch::Params> out;
  out.reserve(fits.size());
  for (const auto& f : fits) out.push_back(f.params);
  return out;
}

FittedModel ModelArtifact::model() const { return FittedModel{basis(), params(), sigma2}; }

ModelArtifact fit_model(const ObservationPanel& panel, const PipelineConfig& config) {
  config.validate();
  if (panel.num_days() == 0 || panel.num_locations() == 0)
    throw Error(ErrorCode::EmptyInput, "panel is empty");
  const auto splines = config.splines();
  for (const auto& l : panel.locations)
    if (!splines.domain().contains(l.lon, l.lat))
      throw Error(ErrorCode::OutOfDomain, "location " + l.id + " lies outside the spline domain");

  ModelArtifact a;
  a.config = config;
  a.dates = panel.dates;
  a.locations = panel.locations;
  a.fingerprint = panel_fingerprint(panel);
  a.coeffs = fit_all_days(splines, panel, config.surface_options());
  a.mean = estimate_mean(panel, a.coeffs);

  const int limit = std::min(a.coeffs.rows(), splines.size());
  if (config.K > limit)
    throw Error(ErrorCode::KOutOfRange,
                "K = " + std::to_string(config.K) + " exceeds min(fitted days = " +
                    std::to_string(a.coeffs.rows()) + ", splines = " +
                    std::to_string(splines.size()) + ")");
  const auto pcs = decompose(a.coeffs, a.mean);
  a.loadings = pcs.loadings.leftCols(config.K);
  a.singular_values = pcs.singular_values;
  a.explained_variance = pcs.explained_variance;

  const auto basis = a.basis();
  auto proj = project_all(basis, panel, config.min_obs_per_day);
  a.beta = std::move(proj.beta);
  a.sigma2 = proj.residuals.sigma2;
  if (a.beta.rows() < kMinGarchLength)
    throw Error(ErrorCode::InsufficientObservations,
                "only " + std::to_string(a.beta.rows()) +
                    " days with coefficients; the GARCH fit needs at least 20");

  for (int k = 0; k < config.K; ++k)
    a.fits.push_back(garch::fit(a.beta.values.col(k), config.garch_options()));
  a.final_state = filter_to(a.params(), a.beta, a.beta.days.back());
  return a;
}

void save_artifact(const fs::path& dir, const ModelArtifact& a) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  std::map<std::string, std::string> files;
  const auto P = a.mean.mean_coeffs.size();

  {
    std::string s = "index,date\n";
    for (std::size_t t = 0; t < a.dates.size(); ++t)
      s += std::to_string(t) + "," + a.dates[t] + "\n";
    files["dates.csv"] = std::move(s);
  }
  {
    std::string s = "city_id,city_name,longitude,latitude\n";
    for (const auto& l : a.locations)
      s += csv::join({l.id, l.name, csv::number(l.lon), csv::number(l.lat)}) + "\n";
    files["locations.csv"] = std::move(s);
  }
  {
    std::string s = "date";
    for (Eigen::Index j = 0; j < P; ++j) s += ",c" + std::to_string(j + 1);
    s += "\n";
    for (int r = 0; r < a.coeffs.rows(); ++r) {
      s += a.dates[static_cast<std::size_t>(a.coeffs.days[static_cast<std::size_t>(r)])];
      for (Eigen::Index j = 0; j < P; ++j) s += "," + csv::number(a.coeffs.values(r, j));
      s += "\n";
    }
    files["coefficients.csv"] = std::move(s);
  }
  {
    std::string s = "date,status,rank,residual_norm,reason\n";
    std::size_t r = 0, k = 0;
    for (std::size_t t = 0; t < a.dates.size(); ++t) {
      if (r < a.coeffs.days.size() && a.coeffs.days[r] == static_cast<int>(t)) {
        s += csv::join({a.dates[t], "fitted", std::to_string(a.coeffs.ranks[r]),
                        csv::number(a.coeffs.residual_norms[r]), ""}) + "\n";
        ++r;
      } else if (k < a.coeffs.skipped.size() && a.coeffs.skipped[k].day == static_cast<int>(t)) {
        s += csv::join({a.dates[t], "skipped", "", "", a.coeffs.skipped[k].reason}) + "\n";
        ++k;
      }
    }
    files["fit_report.csv"] = std::move(s);
  }
  {
    const auto splines = a.config.splines();
    std::string s = "j,i_lon,i_lat,mean_coeff\n";
    for (int j = 0; j < static_cast<int>(P); ++j) {
      const auto [il, ia] = splines.split_index(j);
      s += std::to_string(j + 1) + "," + std::to_string(il + 1) + "," + std::to_string(ia + 1) +
           "," + csv::number(a.mean.mean_coeffs(j)) + "\n";
    }
    files["mean.csv"] = std::move(s);
  }
  {
    std::string s = "j";
    for (int k = 0; k < a.K(); ++k) s += ",phi_" + std::to_string(k + 1);
    s += "\n";
    for (Eigen::Index j = 0; j < a.loadings.rows(); ++j) {
      s += std::to_string(j + 1);
      for (int k = 0; k < a.K(); ++k) s += "," + csv::number(a.loadings(j, k));
      s += "\n";
    }
    files["loadings.csv"] = std::move(s);
  }
  {
    std::string s = "component,singular_value,explained_variance\n";
    for (Eigen::Index k = 0; k < a.singular_values.size(); ++k)
      s += std::to_string(k + 1) + "," + csv::number(a.singular_values(k)) + "," +
           csv::number(a.explained_variance(k)) + "\n";
    files["singular_values.csv"] = std::move(s);
  }
  {
    std::string beta = "date,k,value\n";
    std::string report = "date,residual_norm,min_norm\n";
    std::string innov = "date,k,u,eta2\n";
    for (int r = 0; r < a.beta.rows(); ++r) {
      const auto& date = a.dates[static_cast<std::size_t>(a.beta.days[static_cast<std::size_t>(r)])];
      for (int k = 0; k < a.beta.K(); ++k) {
        beta += date + "," + std::to_string(k + 1) + "," + csv::number(a.beta.values(r, k)) + "\n";
        const auto& f = a.fits[static_cast<std::size_t>(k)].filtered;
        innov += date + "," + std::to_string(k + 1) + "," + csv::number(f.innovations(r)) + "," +
                 csv::number(f.scales2(r)) + "\n";
      }
      report += date + "," + csv::number(a.beta.residual_norms[static_cast<std::size_t>(r)]) + "," +
                bool_text(a.beta.min_norm[static_cast<std::size_t>(r)]) + "\n";
    }
    files["beta.csv"] = std::move(beta);
    files["projection_report.csv"] = std::move(report);
    files["innovations.csv"] = std::move(innov);
  }
  {
    std::string s = "k";
    for (const char* prefix : {"", "se_", "t_", "p_"})
      for (const char* name : garch::kParamNames) s += std::string(",") + prefix + name;
    s += ",log_likelihood,gradient_norm,converged,boundary,evaluations,message\n";
    for (std::size_t k = 0; k < a.fits.size(); ++k) {
      const auto& f = a.fits[k];
      std::vector<std::string> row{std::to_string(k + 1)};
      for (double v : f.params.as_array()) row.push_back(csv::number(v));
      for (const auto* arr : {&f.std_errors, &f.t_ratios, &f.p_values})
        for (double v : *arr) row.push_back(csv::number(v));
      row.push_back(csv::number(f.log_likelihood));
      row.push_back(csv::number(f.gradient_norm));
      row.push_back(bool_text(f.converged));
      row.push_back(bool_text(f.boundary));
      row.push_back(std::to_string(f.evaluations));
      row.push_back(f.message);
      s += csv::join(row) + "\n";
    }
    files["garch.csv"] = std::move(s);
  }
  {
    std::string s = "k,beta,innovation,scale2\n";
    for (std::size_t k = 0; k < a.final_state.coeffs.size(); ++k) {
      const auto& c = a.final_state.coeffs[k];
      s += std::to_string(k + 1) + "," + csv::number(c.beta) + "," + csv::number(c.innovation) +
           "," + csv::number(c.scale2) + "\n";
    }
    files["state.csv"] = std::move(s);
  }
  files["config.json"] = to_json(a.config).dump(2) + "\n";

  json digests = json::object();
  for (const auto& [name, content] : files) digests[name] = fnv1a_hex(content);
  const auto splines = a.config.splines();
  json manifest = {
      {"format", "fts-model"},
      {"version", a.version},
      {"horizon", a.config.horizon},
      {"K", a.K()},
      {"n_splines", P},
      {"n_days", a.dates.size()},
      {"n_fitted_days", a.coeffs.rows()},
      {"n_beta_rows", a.beta.rows()},
      {"n_locations", a.locations.size()},
      {"sigma2", csv::number(a.sigma2)},
      {"grand_mean", csv::number(a.mean.grand_mean)},
      {"centering", csv::number(a.coeffs.centering)},
      {"state_day", a.final_state.day},
      {"state_date", a.dates.at(static_cast<std::size_t>(a.final_state.day))},
      {"first_date", a.dates.front()},
      {"last_date", a.dates.back()},
      {"data_fingerprint", a.fingerprint},
      {"knots", {{"lon", knots_json(splines.lon_knots())}, {"lat", knots_json(splines.lat_knots())}}},
      {"files", digests},
  };
  for (const auto& [name, content] : files) csv::write_file_atomic(dir / name, content);
  csv::write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

ModelArtifact load_artifact(const fs::path& dir) {
  json manifest;
  try {
    manifest = json::parse(csv::read_file(dir / "manifest.json"));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ArtifactMismatch, "manifest.json: " + std::string(e.what()));
  }
  if (manifest.value("format", "") != "fts-model")
    throw Error(ErrorCode::ArtifactMismatch, dir.string() + " is not a model artifact");
  if (manifest.value("version", 0) != kArtifactVersion)
    throw Error(ErrorCode::ArtifactMismatch, "unsupported artifact version");
  for (const auto& [name, digest] : manifest.at("files").items()) {
    if (fnv1a_hex(csv::read_file(dir / name)) != digest.get<std::string>())
      throw Error(ErrorCode::ArtifactMismatch, name + " does not match its manifest digest");
  }

  ModelArtifact a;
  a.config = config_from_json(json::parse(csv::read_file(dir / "config.json")));
  auto number = [&](const char* key) {
    double v = 0.0;
    if (!csv::parse_number(manifest.at(key).get<std::string>(), v))
      throw Error(ErrorCode::ArtifactMismatch, std::string("manifest field ") + key);
    return v;
  };
  a.sigma2 = number("sigma2");
  a.fingerprint = manifest.at("data_fingerprint").get<std::string>();

  std::map<std::string, int> day_of;
  {
    const auto t = csv::read_table(dir / "dates.csv");
    for (const auto& row : t.rows) {
      day_of[row.at(1)] = static_cast<int>(a.dates.size());
      a.dates.push_back(row.at(1));
    }
  }
  auto day_index = [&](const std::string& date, const std::string& file) {
    const auto it = day_of.find(date);
    if (it == day_of.end()) throw Error(ErrorCode::ArtifactMismatch, file + ": unknown date " + date);
    return it->second;
  };
  {
    const auto t = csv::read_table(dir / "locations.csv");
    for (std::size_t r = 0; r < t.rows.size(); ++r)
      a.locations.push_back({t.rows[r].at(0), t.rows[r].at(1), cell(t, r, 2, "locations.csv"),
                             cell(t, r, 3, "locations.csv")});
  }
  const auto splines = a.config.splines();
  const int P = splines.size();
  if (manifest.at("n_splines").get<int>() != P)
    throw Error(ErrorCode::ArtifactMismatch, "spline count disagrees with the config");
  {
    const auto t = csv::read_table(dir / "coefficients.csv");
    a.coeffs.values.resize(static_cast<Eigen::Index>(t.rows.size()), P);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      a.coeffs.days.push_back(day_index(t.rows[r].at(0), "coefficients.csv"));
      for (int j = 0; j < P; ++j)
        a.coeffs.values(static_cast<Eigen::Index>(r), j) = cell(t, r, static_cast<std::size_t>(j + 1), "coefficients.csv");
    }
    a.coeffs.centering = number("centering");
  }
  {
    const auto t = csv::read_table(dir / "fit_report.csv");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const int day = day_index(t.rows[r].at(0), "fit_report.csv");
      if (t.rows[r].at(1) == "fitted") {
        a.coeffs.ranks.push_back(static_cast<int>(cell(t, r, 2, "fit_report.csv")));
        a.coeffs.residual_norms.push_back(cell(t, r, 3, "fit_report.csv"));
      } else {
        a.coeffs.skipped.push_back({day, t.rows[r].at(4)});
      }
    }
  }
  {
    const auto t = csv::read_table(dir / "mean.csv");
    if (static_cast<int>(t.rows.size()) != P)
      throw Error(ErrorCode::ArtifactMismatch, "mean.csv has the wrong length");
    a.mean.grand_mean = number("grand_mean");
    a.mean.mean_coeffs.resize(P);
    for (int j = 0; j < P; ++j) a.mean.mean_coeffs(j) = cell(t, static_cast<std::size_t>(j), 3, "mean.csv");
  }
  const int K = manifest.at("K").get<int>();
  {
    const auto t = csv::read_table(dir / "loadings.csv");
    if (static_cast<int>(t.rows.size()) != P || static_cast<int>(t.header.size()) != K + 1)
      throw Error(ErrorCode::ArtifactMismatch, "loadings.csv shape disagrees with the manifest");
    a.loadings.resize(P, K);
    for (int j = 0; j < P; ++j)
      for (int k = 0; k < K; ++k)
        a.loadings(j, k) = cell(t, static_cast<std::size_t>(j), static_cast<std::size_t>(k + 1), "loadings.csv");
  }
  {
    const auto t = csv::read_table(dir / "singular_values.csv");
    a.singular_values.resize(static_cast<Eigen::Index>(t.rows.size()));
    a.explained_variance.resize(static_cast<Eigen::Index>(t.rows.size()));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      a.singular_values(static_cast<Eigen::Index>(r)) = cell(t, r, 1, "singular_values.csv");
      a.explained_variance(static_cast<Eigen::Index>(r)) = cell(t, r, 2, "singular_values.csv");
    }
  }
  {
    const auto t = csv::read_table(dir / "projection_report.csv");
    const auto rows = static_cast<Eigen::Index>(t.rows.size());
    a.beta.values.resize(rows, K);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      a.beta.days.push_back(day_index(t.rows[r].at(0), "projection_report.csv"));
      a.beta.residual_norms.push_back(cell(t, r, 1, "projection_report.csv"));
      a.beta.min_norm.push_back(t.rows[r].at(2) == "1");
    }
    const auto b = csv::read_table(dir / "beta.csv");
    const auto inn = csv::read_table(dir / "innovations.csv");
    if (b.rows.size() != static_cast<std::size_t>(rows * K) || inn.rows.size() != b.rows.size())
      throw Error(ErrorCode::ArtifactMismatch, "beta.csv shape disagrees with the manifest");
    a.fits.resize(static_cast<std::size_t>(K));
    for (auto& f : a.fits) {
      f.filtered.innovations.resize(rows);
      f.filtered.scales2.resize(rows);
    }
    for (std::size_t i = 0; i < b.rows.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i / static_cast<std::size_t>(K));
      const auto k = static_cast<std::size_t>(i % static_cast<std::size_t>(K));
      a.beta.values(r, static_cast<Eigen::Index>(k)) = cell(b, i, 2, "beta.csv");
      a.fits[k].filtered.innovations(r) = cell(inn, i, 2, "innovations.csv");
      a.fits[k].filtered.scales2(r) = cell(inn, i, 3, "innovations.csv");
    }
  }
  {
    const auto t = csv::read_table(dir / "garch.csv");
    if (static_cast<int>(t.rows.size()) != K)
      throw Error(ErrorCode::ArtifactMismatch, "garch.csv has the wrong number of rows");
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
      auto& f = a.fits[k];
      std::array<double, 5> p{};
      for (std::size_t i = 0; i < 5; ++i) {
        p[i] = cell(t, k, 1 + i, "garch.csv");
        f.std_errors[i] = cell(t, k, 6 + i, "garch.csv");
        f.t_ratios[i] = cell(t, k, 11 + i, "garch.csv");
        f.p_values[i] = cell(t, k, 16 + i, "garch.csv");
      }
      f.params = garch::Params::from_array(p);
      f.log_likelihood = cell(t, k, 21, "garch.csv");
      f.gradient_norm = cell(t, k, 22, "garch.csv");
      f.converged = t.rows[k].at(23) == "1";
      f.boundary = t.rows[k].at(24) == "1";
      f.evaluations = static_cast<int>(cell(t, k, 25, "garch.csv"));
      f.message = t.rows[k].at(26);
    }
  }
  {
    const auto t = csv::read_table(dir / "state.csv");
    a.final_state.day = manifest.at("state_day").get<int>();
    for (std::size_t k = 0; k < t.rows.size(); ++k)
      a.final_state.coeffs.push_back(
          {cell(t, k, 1, "state.csv"), cell(t, k, 2, "state.csv"), cell(t, k, 3, "state.csv")});
    if (static_cast<int>(a.final_state.coeffs.size()) != K)
      throw Error(ErrorCode::ArtifactMismatch, "state.csv has the wrong number of rows");
  }
  return a;
}

AdjustRun run_adjust(const ModelArtifact& artifact, const ObservationPanel& panel,
                     EvaluationMode mode, const WalkForwardOptions& wf) {
  if (panel.horizon != artifact.config.horizon)
    throw Error(ErrorCode::AlignmentMismatch,
                "panel horizon " + std::to_string(panel.horizon) + " differs from model horizon " +
                    std::to_string(artifact.config.horizon));
  const auto model = artifact.model();
  AdjustRun run;
  run.projection = project_all(model.basis, panel, artifact.config.min_obs_per_day);
  run.predictions = rolling_predictions(model, run.projection.beta, panel.num_days(),
                                        panel.locations, mode, wf);
  run.adjustment = adjust_forecasts(run.predictions, panel);
  return run;
}

NextDayPrediction predict_next(const ModelArtifact& artifact, const ObservationPanel* recent) {
  const auto model = artifact.model();
  const auto origin = parse_iso_date(artifact.dates.front());
  if (!origin) throw Error(ErrorCode::ArtifactMismatch, "artifact has an invalid first date");
  PredictionState state = artifact.final_state;
  std::vector<Location> locations = artifact.locations;

  if (recent && recent->num_days() > 0) {
    if (recent->horizon != artifact.config.horizon)
      throw Error(ErrorCode::AlignmentMismatch, "recent panel horizon differs from the model");
    const auto proj = project_all(model.basis, *recent, artifact.config.min_obs_per_day);
    std::map<int, Eigen::VectorXd> by_day;
    for (int r = 0; r < proj.beta.rows(); ++r) {
      const auto d = parse_iso_date(recent->dates[static_cast<std::size_t>(proj.beta.days[static_cast<std::size_t>(r)])]);
      by_day[static_cast<int>((*d - *origin).count())] = proj.beta.values.row(r).transpose();
    }
    const auto last = parse_iso_date(recent->dates.back());
    const int last_day = static_cast<int>((*last - *origin).count());
    const auto first = parse_iso_date(recent->dates.front());
    if (static_cast<int>((*first - *origin).count()) <= state.day)
      throw Error(ErrorCode::StaleState, "recent days must follow the model's last date " +
                                             artifact.dates[static_cast<std::size_t>(state.day)]);
    const auto params = artifact.params();
    while (state.day < last_day) {
      const auto it = by_day.find(state.day + 1);
      state = step(params, state, it == by_day.end() ? nullptr : &it->second);
    }
    locations = recent->locations;
  }

  NextDayPrediction out;
  out.date = format_iso_date(*origin + std::chrono::days{state.day + 1});
  out.locations = locations;
  out.laws = predict_coefficients(artifact.params(), state, state.day + 1);
  out.field = predict_error_field(model, out.laws, locations);
  return out;
}

DiagnosticsReport run_diagnostics(const ModelArtifact& artifact, const ObservationPanel& panel,
                                  std::span<const int> K_values) {
  const auto opts = artifact.config.correlation_options();
  const auto model = artifact.model();
  DiagnosticsReport rep;
  rep.before = spatial_correlation(panel.errors, panel.locations, CorrelationKind::Before, opts);
  const auto proj = project_all(model.basis, panel, artifact.config.min_obs_per_day);
  rep.after = spatial_correlation(proj.residuals.values, panel.locations, CorrelationKind::After, opts);
  rep.correlogram_before = correlogram(rep.before, panel.locations);
  rep.correlogram_after = correlogram(rep.after, panel.locations);
  if (!K_values.empty()) {
    const auto pcs = decompose(artifact.coeffs, artifact.mean);
    rep.frobenius = frobenius_curve(panel, artifact.config.splines(), artifact.mean, pcs, K_values,
                                    artifact.config.min_obs_per_day, opts);
  }
  return rep;
}

std::string format_correlation(const SpatialCorrelation& corr, std::span<const Location> locations) {
  std::string s = "city_id";
  for (int i : corr.order) s += "," + csv::escape(locations[static_cast<std::size_t>(i)].id);
  s += "\n";
  const auto m = corr.ordered();
  for (std::size_t a = 0; a < corr.order.size(); ++a) {
    s += csv::escape(locations[static_cast<std::size_t>(corr.order[a])].id);
    for (std::size_t b = 0; b < corr.order.size(); ++b)
      s += "," + csv::number(m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
    s += "\n";
  }
  return s;
}

std::string format_correlogram(const std::vector<CorrelogramPoint>& points,
                               std::span<const Location> locations) {
  std::string s = "distance_km,correlation,city_i,city_j\n";
  for (const auto& p : points)
    s += csv::join({csv::number(p.distance_km), csv::number(p.correlation),
                    locations[static_cast<std::size_t>(p.i)].id,
                    locations[static_cast<std::size_t>(p.j)].id}) + "\n";
  return s;
}

std::string format_frobenius(const std::vector<FrobeniusPoint>& curve) {
  std::string s = "K,sum_squared_correlation\n";
  for (const auto& p : curve) s += std::to_string(p.K) + "," + csv::number(p.sum_squared) + "\n";
  return s;
}

std::string format_basis_grid(const BasisGrid& grid) {
  std::string s = "lon,lat,value\n";
  for (Eigen::Index a = 0; a < grid.lon_axis.size(); ++a)
    for (Eigen::Index b = 0; b < grid.lat_axis.size(); ++b)
      s += csv::number(grid.lon_axis(a)) + "," + csv::number(grid.lat_axis(b)) + "," +
           csv::number(grid.values(a, b)) + "\n";
  return s;
}

std::string format_adjusted(const std::vector<AdjustedForecastRecord>& records) {
  std::string s = "date,city_id,F,Y_hat,F_adj,A,Y,Z,predictive_sd\n";
  for (const auto& r : records)
    s += csv::join({r.date, r.city_id, csv::number(r.forecast), csv::number(r.predicted_error),
                    csv::number(r.adjusted), csv::number(r.actual), csv::number(r.raw_error),
                    csv::number(r.adjusted_error), csv::number(r.predictive_sd)}) + "\n";
  return s;
}

std::string format_summary(const AdjustmentSummary& s, EvaluationMode mode, int K) {
  const json j = {
      {"mode", to_string(mode)},
      {"K", K},
      {"count", s.count},
      {"Y", {{"mean", s.mean_raw}, {"sd", s.sd_raw}}},
      {"Z", {{"mean", s.mean_adjusted}, {"sd", s.sd_adjusted}}},
      {"sd_reduction", s.sd_reduction},
  };
  return j.dump(2) + "\n";
}

std::string format_histogram(const Histogram& h) {
  std::string s = "bin_lower,bin_upper,count_Y,count_Z\n";
  for (Eigen::Index b = 0; b < h.raw_counts.size(); ++b)
    s += csv::number(h.edges(b)) + "," + csv::number(h.edges(b + 1)) + "," +
         csv::number(h.raw_counts(b)) + "," + csv::number(h.adjusted_counts(b)) + "\n";
  return s;
}

}  // namespace fts
