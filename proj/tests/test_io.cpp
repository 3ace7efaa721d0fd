#include "doctest.h"

#include <sstream>

#include "fts/config.hpp"
#include "fts/csv.hpp"
#include "fts/dates.hpp"
#include "fts/error.hpp"
#include "fts/io.hpp"
#include "fts/simulator.hpp"

using namespace fts;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Io;
}

bool same_bits(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double x = a.data()[i], y = b.data()[i];
    if (!(x == y || (std::isnan(x) && std::isnan(y)))) return false;
  }
  return true;
}

const char* kHeader = "date,city_id,city_name,longitude,latitude,horizon_days,forecast_F,actual_F\n";

}  // namespace

TEST_CASE("dates") {
  CHECK(add_days("2016-02-28", 1) == "2016-02-29");
  CHECK(add_days("2017-02-28", 1) == "2017-03-01");
  CHECK(add_days("2014-12-31", 1) == "2015-01-01");
  CHECK_FALSE(parse_iso_date("2015-02-30"));
  CHECK_FALSE(parse_iso_date("2015-1-03"));
  CHECK_FALSE(parse_iso_date("garbage"));
  CHECK(format_iso_date(*parse_iso_date("2015-07-04")) == "2015-07-04");
}

TEST_CASE("csv fields") {
  CHECK(csv::split_line("a,\"b,c\",,d") == std::vector<std::string>{"a", "b,c", "", "d"});
  CHECK(csv::split_line("\"say \"\"hi\"\"\",x\r") == std::vector<std::string>{"say \"hi\"", "x"});
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("a,b") == "\"a,b\"");
  CHECK(csv::number(kMissing).empty());
  CHECK(csv::number(0.1) == "0.1");
  double v = 0.0;
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    REQUIRE(csv::parse_number(csv::number(x), v));
    CHECK(v == x);
  }
  REQUIRE(csv::parse_number("", v));
  CHECK(std::isnan(v));
  CHECK_FALSE(csv::parse_number("1.5x", v));
  CHECK_FALSE(csv::parse_number("inf", v));
  REQUIRE(csv::parse_number(csv::number(-HUGE_VAL), v, true));
  CHECK(v == -HUGE_VAL);
}

TEST_CASE("FNV-1a digests") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("ingest builds errors for one horizon") {
  std::istringstream in(std::string(kHeader) +
                        "2015-01-01,KSEA,Seattle,-122.3,47.4,6,70,72\n"
                        "2015-01-01,KSEA,Seattle,-122.3,47.4,3,60,72\n"
                        "2015-01-03,KBOS,Boston,-71.0,42.4,6,50,\n"
                        "2015-01-03,KSEA,Seattle,-122.3,47.4,6,68,65\n");
  const auto p = ingest(in, 6);
  REQUIRE(p.num_days() == 3);
  REQUIRE(p.num_locations() == 2);
  CHECK(p.dates[1] == "2015-01-02");
  CHECK(p.errors(0, 0) == -2.0);
  CHECK(p.errors(2, 0) == 3.0);
  CHECK(std::isnan(p.errors(1, 0)));
  CHECK(std::isnan(p.errors(2, 1)));
  CHECK(p.forecasts(2, 1) == 50.0);
  CHECK(p.locations[1].name == "Boston");
  CHECK(p.horizon == 6);
}

TEST_CASE("ingest errors and reports") {
  std::istringstream only3(std::string(kHeader) + "2015-01-01,A,A,-100,40,3,70,72\n");
  CHECK(code_of([&] { ingest(only3, 6); }) == ErrorCode::EmptySelection);
  std::istringstream any(kHeader);
  CHECK(code_of([&] { ingest(any, 7); }) == ErrorCode::UnknownHorizon);
  std::istringstream noheader("date,city_id\n");
  CHECK(code_of([&] { ingest(noheader, 6); }) == ErrorCode::MalformedRow);

  std::istringstream messy(std::string(kHeader) +
                           "2015-01-01,A,A,-100,40,6,70,72\n"
                           "2015-13-01,A,A,-100,40,6,70,72\n"
                           "2015-01-02,A,A,-100,forty,6,70,72\n"
                           "2015-01-02,A,A,-100,40,6,71\n"
                           "2015-01-01,A,A,-100,40,6,75,72\n");
  IngestReport report;
  const auto p = ingest(messy, 6, &report);
  REQUIRE(report.rejected.size() == 3);
  CHECK(report.rejected[0].rfind("line 3:", 0) == 0);
  CHECK(report.rejected[1].rfind("line 4:", 0) == 0);
  CHECK(report.rejected[2].rfind("line 5:", 0) == 0);
  REQUIRE(report.warnings.size() == 1);
  CHECK(report.warnings[0].find("last row wins") != std::string::npos);
  CHECK(p.errors(0, 0) == 3.0);
}

TEST_CASE("simulator output round-trips through the table format") {
  SimulationConfig c;
  c.n_cities = 15;
  c.T = 40;
  c.missing_rate = 0.2;
  const auto sim = simulate_panel(c);
  std::istringstream in(format_panel(sim.panel));
  const auto back = ingest(in, sim.panel.horizon);
  CHECK(back.dates == sim.panel.dates);
  REQUIRE(back.locations.size() == sim.panel.locations.size());
  for (std::size_t i = 0; i < back.locations.size(); ++i) {
    CHECK(back.locations[i].id == sim.panel.locations[i].id);
    CHECK(back.locations[i].lon == sim.panel.locations[i].lon);
  }
  CHECK(same_bits(back.forecasts, sim.panel.forecasts));
  CHECK(same_bits(back.actuals, sim.panel.actuals));
  CHECK(same_bits(back.errors, sim.panel.errors));
  CHECK(panel_fingerprint(back) == panel_fingerprint(sim.panel));
}

TEST_CASE("config parsing") {
  const auto c = config_from_json(nlohmann::json::parse(R"({
    "horizon": 3, "K": 8, "evaluation_mode": "walkforward",
    "domain": {"lon_min": -125, "lon_max": -65, "lat_min": 24, "lat_max": 50},
    "garch": {"seed": 4, "random_starts": 2},
    "correlation": {"completeness": "global", "min_days": 20}
  })"));
  CHECK(c.horizon == 3);
  CHECK(c.K == 8);
  CHECK(c.mode == EvaluationMode::WalkForward);
  CHECK(c.domain.lon_min == -125.0);
  CHECK(c.garch_seed == 4);
  CHECK(c.completeness == Completeness::Global);
  CHECK(c.n_interior_lon == 13);

  const auto again = config_from_json(to_json(c));
  CHECK(to_json(again) == to_json(c));

  CHECK(code_of([] { config_from_json(nlohmann::json::parse(R"({"kay": 3})")); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { config_from_json(nlohmann::json::parse(R"({"garch": {"sed": 3}})")); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([] { config_from_json(nlohmann::json::parse(R"({"horizon": 9})")); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([] { config_from_json(nlohmann::json::parse(R"({"K": "many"})")); }) ==
        ErrorCode::InvalidConfig);
}

TEST_CASE("environment overrides") {
  PipelineConfig c;
  apply_env(c, [](const std::string& name) -> std::optional<std::string> {
    if (name == "FTS_K") return "7";
    if (name == "FTS_MODE") return "walk-forward";
    if (name == "FTS_SVD_RTOL") return "1e-6";
    return std::nullopt;
  });
  CHECK(c.K == 7);
  CHECK(c.mode == EvaluationMode::WalkForward);
  CHECK(c.svd_rtol == 1e-6);
  CHECK(c.horizon == 6);
  CHECK(code_of([&] {
          apply_env(c, [](const std::string& n) -> std::optional<std::string> {
            return n == "FTS_HORIZON" ? std::optional<std::string>("six") : std::nullopt;
          });
        }) == ErrorCode::InvalidConfig);
}

TEST_CASE("simulation config") {
  const auto s = simulation_config_from_json(nlohmann::json::parse(R"({
    "T": 50, "K_true": 2, "garch": [{"psi": 0.5, "omega": 1, "alpha": 0.1, "gamma": 0.8, "nu": 6},
              {"psi": 0.2, "omega": 2, "alpha": 0.05, "gamma": 0.9, "nu": 9}],
    "locations": [{"id": "a", "name": "A", "lon": -100, "lat": 40}]
  })"));
  CHECK(s.T == 50);
  REQUIRE(s.garch.size() == 2);
  CHECK(s.garch[1].nu == 9.0);
  CHECK(s.locations[0].lon == -100.0);
  CHECK_THROWS_AS(simulation_config_from_json(nlohmann::json::parse(R"({"TT": 5})")), Error);
}
