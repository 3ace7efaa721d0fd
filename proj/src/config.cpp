#include "fts/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "fts/csv.hpp"
#include "fts/error.hpp"

namespace fts {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, where + " must be a JSON object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key))
      throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidConfig, where + "." + key + " has the wrong type");
  }
}

Completeness parse_completeness(const std::string& s) {
  if (s == "pairwise") return Completeness::Pairwise;
  if (s == "global") return Completeness::Global;
  throw Error(ErrorCode::InvalidConfig, "completeness must be 'pairwise' or 'global'");
}

Domain read_domain(const json& j, Domain d, const std::string& where) {
  require_object(j, where);
  reject_unknown(j, {"lon_min", "lon_max", "lat_min", "lat_max"}, where);
  read(j, "lon_min", d.lon_min, where);
  read(j, "lon_max", d.lon_max, where);
  read(j, "lat_min", d.lat_min, where);
  read(j, "lat_max", d.lat_max, where);
  return d;
}

json domain_json(const Domain& d) {
  return {{"lon_min", d.lon_min}, {"lon_max", d.lon_max}, {"lat_min", d.lat_min}, {"lat_max", d.lat_max}};
}

garch::Params read_params(const json& j, const std::string& where) {
  require_object(j, where);
  reject_unknown(j, {"psi", "omega", "alpha", "gamma", "nu"}, where);
  garch::Params p;
  read(j, "psi", p.psi, where);
  read(j, "omega", p.omega, where);
  read(j, "alpha", p.alpha, where);
  read(j, "gamma", p.gamma, where);
  read(j, "nu", p.nu, where);
  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, where + ": " + e.what());
  }
  return p;
}

}  // namespace

garch::FitOptions PipelineConfig::garch_options() const {
  garch::FitOptions o;
  o.seed = garch_seed;
  o.random_starts = garch_random_starts;
  return o;
}

WalkForwardOptions PipelineConfig::walkforward_options() const {
  WalkForwardOptions o;
  o.refit_interval = walkforward_refit_interval;
  o.min_history = walkforward_min_history;
  o.fit = garch_options();
  return o;
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
  if (horizon < 0 || horizon > 6) fail("horizon must be 0..6");
  if (!(domain.lon_max > domain.lon_min) || !(domain.lat_max > domain.lat_min))
    fail("domain must have max > min on both axes");
  if (n_interior_lon < 0 || n_interior_lat < 0) fail("interior knot counts must be >= 0");
  if (!(svd_rtol > 0.0 && svd_rtol < 1.0)) fail("svd_rtol must lie in (0, 1)");
  if (min_obs_per_day < 1) fail("min_obs_per_day must be >= 1");
  if (K < 1) fail("K must be >= 1");
  if (garch_random_starts < 0) fail("garch.random_starts must be >= 0");
  if (walkforward_refit_interval < 1) fail("walkforward.refit_interval must be >= 1");
  if (walkforward_min_history < 20) fail("walkforward.min_history must be >= 20");
  if (min_pair_days < 3) fail("correlation.min_days must be >= 3");
}

PipelineConfig config_from_json(const json& j, PipelineConfig c) {
  require_object(j, "config");
  reject_unknown(j,
                 {"horizon", "domain", "n_interior_lon", "n_interior_lat", "svd_rtol",
                  "min_obs_per_day", "K", "garch", "evaluation_mode", "walkforward", "correlation",
                  "paths"},
                 "config");
  read(j, "horizon", c.horizon, "config");
  if (j.contains("domain")) c.domain = read_domain(j["domain"], c.domain, "config.domain");
  read(j, "n_interior_lon", c.n_interior_lon, "config");
  read(j, "n_interior_lat", c.n_interior_lat, "config");
  read(j, "svd_rtol", c.svd_rtol, "config");
  read(j, "min_obs_per_day", c.min_obs_per_day, "config");
  read(j, "K", c.K, "config");
  if (j.contains("garch")) {
    const auto& g = j["garch"];
    require_object(g, "config.garch");
    reject_unknown(g, {"seed", "random_starts"}, "config.garch");
    read(g, "seed", c.garch_seed, "config.garch");
    read(g, "random_starts", c.garch_random_starts, "config.garch");
  }
  if (j.contains("evaluation_mode")) {
    std::string m;
    read(j, "evaluation_mode", m, "config");
    c.mode = parse_mode(m);
  }
  if (j.contains("walkforward")) {
    const auto& w = j["walkforward"];
    require_object(w, "config.walkforward");
    reject_unknown(w, {"refit_interval", "min_history"}, "config.walkforward");
    read(w, "refit_interval", c.walkforward_refit_interval, "config.walkforward");
    read(w, "min_history", c.walkforward_min_history, "config.walkforward");
  }
  if (j.contains("correlation")) {
    const auto& r = j["correlation"];
    require_object(r, "config.correlation");
    reject_unknown(r, {"completeness", "min_days"}, "config.correlation");
    if (r.contains("completeness")) {
      std::string s;
      read(r, "completeness", s, "config.correlation");
      c.completeness = parse_completeness(s);
    }
    read(r, "min_days", c.min_pair_days, "config.correlation");
  }
  if (j.contains("paths")) {
    const auto& p = j["paths"];
    require_object(p, "config.paths");
    reject_unknown(p, {"input", "out"}, "config.paths");
    read(p, "input", c.input_path, "config.paths");
    read(p, "out", c.output_path, "config.paths");
  }
  c.validate();
  return c;
}

json to_json(const PipelineConfig& c) {
  return {
      {"horizon", c.horizon},
      {"domain", domain_json(c.domain)},
      {"n_interior_lon", c.n_interior_lon},
      {"n_interior_lat", c.n_interior_lat},
      {"svd_rtol", c.svd_rtol},
      {"min_obs_per_day", c.min_obs_per_day},
      {"K", c.K},
      {"garch", {{"seed", c.garch_seed}, {"random_starts", c.garch_random_starts}}},
      {"evaluation_mode", to_string(c.mode)},
      {"walkforward",
       {{"refit_interval", c.walkforward_refit_interval}, {"min_history", c.walkforward_min_history}}},
      {"correlation",
       {{"completeness", c.completeness == Completeness::Pairwise ? "pairwise" : "global"},
        {"min_days", c.min_pair_days}}},
  };
}

PipelineConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(csv::read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void apply_env(PipelineConfig& c, const EnvLookup& lookup) {
  auto integer = [&](const char* name, auto& out) {
    if (auto v = lookup(name)) {
      try {
        std::size_t used = 0;
        const long long x = std::stoll(*v, &used);
        if (used != v->size()) throw std::invalid_argument("trailing");
        out = static_cast<std::remove_reference_t<decltype(out)>>(x);
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidConfig, std::string(name) + " is not an integer");
      }
    }
  };
  integer("FTS_HORIZON", c.horizon);
  integer("FTS_K", c.K);
  integer("FTS_SEED", c.garch_seed);
  integer("FTS_MIN_OBS_PER_DAY", c.min_obs_per_day);
  if (auto v = lookup("FTS_SVD_RTOL")) {
    double x = 0.0;
    if (!csv::parse_number(*v, x) || is_missing(x))
      throw Error(ErrorCode::InvalidConfig, "FTS_SVD_RTOL is not a number");
    c.svd_rtol = x;
  }
  if (auto v = lookup("FTS_MODE")) c.mode = parse_mode(*v);
  c.validate();
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  };
}

EvaluationMode parse_mode(const std::string& text) {
  if (text == "filtered") return EvaluationMode::Filtered;
  if (text == "walkforward" || text == "walk-forward") return EvaluationMode::WalkForward;
  throw Error(ErrorCode::InvalidConfig, "mode must be 'filtered' or 'walkforward', got '" + text + "'");
}

std::string to_string(EvaluationMode mode) {
  return mode == EvaluationMode::Filtered ? "filtered" : "walkforward";
}

SimulationConfig simulation_config_from_json(const json& j) {
  require_object(j, "simulation");
  reject_unknown(j,
                 {"domain", "n_interior_lon", "n_interior_lat", "K_true", "garch", "sigma",
                  "locations", "n_cities", "inset", "T", "missing_rate", "seed", "mean_offset",
                  "mean_amplitude", "horizon", "start_date"},
                 "simulation");
  SimulationConfig c;
  if (j.contains("domain")) c.domain = read_domain(j["domain"], c.domain, "simulation.domain");
  read(j, "n_interior_lon", c.n_interior_lon, "simulation");
  read(j, "n_interior_lat", c.n_interior_lat, "simulation");
  read(j, "K_true", c.K_true, "simulation");
  if (j.contains("garch")) {
    const auto& g = j["garch"];
    c.garch.clear();
    if (g.is_array()) {
      for (std::size_t k = 0; k < g.size(); ++k)
        c.garch.push_back(read_params(g[k], "simulation.garch[" + std::to_string(k) + "]"));
    } else {
      c.garch.push_back(read_params(g, "simulation.garch"));
    }
  }
  read(j, "sigma", c.sigma, "simulation");
  if (j.contains("locations")) {
    const auto& ls = j["locations"];
    if (!ls.is_array()) throw Error(ErrorCode::InvalidConfig, "simulation.locations must be an array");
    for (const auto& l : ls) {
      require_object(l, "simulation.locations[]");
      reject_unknown(l, {"id", "name", "lon", "lat"}, "simulation.locations[]");
      Location loc;
      read(l, "id", loc.id, "simulation.locations[]");
      read(l, "name", loc.name, "simulation.locations[]");
      read(l, "lon", loc.lon, "simulation.locations[]");
      read(l, "lat", loc.lat, "simulation.locations[]");
      c.locations.push_back(loc);
    }
  }
  read(j, "n_cities", c.n_cities, "simulation");
  read(j, "inset", c.inset, "simulation");
  read(j, "T", c.T, "simulation");
  read(j, "missing_rate", c.missing_rate, "simulation");
  read(j, "seed", c.seed, "simulation");
  read(j, "mean_offset", c.mean_offset, "simulation");
  read(j, "mean_amplitude", c.mean_amplitude, "simulation");
  read(j, "horizon", c.horizon, "simulation");
  read(j, "start_date", c.start_date, "simulation");
  validate(c);
  return c;
}

json to_json(const SimulationConfig& c) {
  json garch = json::array();
  for (const auto& p : c.garch)
    garch.push_back({{"psi", p.psi}, {"omega", p.omega}, {"alpha", p.alpha}, {"gamma", p.gamma}, {"nu", p.nu}});
  json j = {{"domain", domain_json(c.domain)},
            {"n_interior_lon", c.n_interior_lon},
            {"n_interior_lat", c.n_interior_lat},
            {"K_true", c.K_true},
            {"garch", garch},
            {"sigma", c.sigma},
            {"n_cities", c.n_cities},
            {"inset", c.inset},
            {"T", c.T},
            {"missing_rate", c.missing_rate},
            {"seed", c.seed},
            {"mean_offset", c.mean_offset},
            {"mean_amplitude", c.mean_amplitude},
            {"horizon", c.horizon},
            {"start_date", c.start_date}};
  if (!c.locations.empty()) {
    json ls = json::array();
    for (const auto& l : c.locations) ls.push_back({{"id", l.id}, {"name", l.name}, {"lon", l.lon}, {"lat", l.lat}});
    j["locations"] = ls;
  }
  return j;
}

}  // namespace fts
