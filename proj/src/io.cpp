#include "fts/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>

#include "fts/csv.hpp"
#include "fts/dates.hpp"
#include "fts/error.hpp"

namespace fts {

namespace {

struct Entry {
  std::chrono::sys_days day;
  std::size_t city;
  double forecast;
  double actual;
};

constexpr std::array<const char*, 8> kColumns{"date",     "city_id",      "city_name",  "longitude",
                                              "latitude", "horizon_days", "forecast_F", "actual_F"};

}  // namespace

ObservationPanel ingest(std::istream& in, int horizon, IngestReport* report,
                        const std::string& source) {
  if (horizon < 0 || horizon > 6)
    throw Error(ErrorCode::UnknownHorizon, "horizon must be 0..6, got " + std::to_string(horizon));
  IngestReport local;
  IngestReport& rep = report ? *report : local;

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedRow, source + " is empty");
  const auto header = csv::split_line(line);
  std::array<std::size_t, 8> col{};
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    const auto it = std::find(header.begin(), header.end(), kColumns[c]);
    if (it == header.end())
      throw Error(ErrorCode::MalformedRow,
                  source + ": header lacks column '" + kColumns[c] + "'");
    col[c] = static_cast<std::size_t>(it - header.begin());
  }
  const std::size_t width = *std::max_element(col.begin(), col.end()) + 1;

  ObservationPanel panel;
  panel.horizon = horizon;
  std::map<std::string, std::size_t> city_index;
  std::vector<Entry> entries;
  std::map<std::pair<std::chrono::sys_days, std::size_t>, std::size_t> seen;
  long line_no = 1;
  auto reject = [&](const std::string& why) {
    rep.rejected.push_back("line " + std::to_string(line_no) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split_line(line);
    if (f.size() < width) {
      reject("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
      continue;
    }
    double h = 0.0;
    if (!csv::parse_number(f[col[5]], h) || is_missing(h) || h != std::floor(h) || h < 0 || h > 6) {
      reject("bad horizon_days '" + f[col[5]] + "'");
      continue;
    }
    const auto day = parse_iso_date(f[col[0]]);
    if (!day) {
      reject("bad date '" + f[col[0]] + "'");
      continue;
    }
    double lon = 0.0, lat = 0.0, fc = 0.0, ac = 0.0;
    if (!csv::parse_number(f[col[3]], lon) || is_missing(lon) ||
        !csv::parse_number(f[col[4]], lat) || is_missing(lat)) {
      reject("bad coordinates");
      continue;
    }
    if (!csv::parse_number(f[col[6]], fc)) {
      reject("bad forecast_F '" + f[col[6]] + "'");
      continue;
    }
    if (!csv::parse_number(f[col[7]], ac)) {
      reject("bad actual_F '" + f[col[7]] + "'");
      continue;
    }
    if (f[col[1]].empty()) {
      reject("empty city_id");
      continue;
    }
    if (static_cast<int>(h) != horizon) continue;

    const auto& id = f[col[1]];
    auto [it, inserted] = city_index.try_emplace(id, panel.locations.size());
    if (inserted) {
      panel.locations.push_back({id, f[col[2]], lon, lat});
    } else {
      const auto& loc = panel.locations[it->second];
      if (loc.lon != lon || loc.lat != lat)
        rep.warnings.push_back("line " + std::to_string(line_no) + ": city " + id +
                               " coordinates differ from first occurrence; keeping the first");
    }
    const auto key = std::make_pair(*day, it->second);
    if (auto s = seen.find(key); s != seen.end()) {
      rep.warnings.push_back("line " + std::to_string(line_no) + ": duplicate " + f[col[0]] +
                             " / " + id + "; last row wins");
      entries[s->second] = {*day, it->second, fc, ac};
    } else {
      seen.emplace(key, entries.size());
      entries.push_back({*day, it->second, fc, ac});
    }
  }

  if (entries.empty())
    throw Error(ErrorCode::EmptySelection,
                source + ": no rows for horizon " + std::to_string(horizon));

  auto [lo, hi] = std::minmax_element(entries.begin(), entries.end(),
                                      [](const Entry& a, const Entry& b) { return a.day < b.day; });
  const auto first = lo->day;
  const int days = static_cast<int>((hi->day - first).count()) + 1;
  const auto n = static_cast<Eigen::Index>(panel.locations.size());
  for (int d = 0; d < days; ++d) panel.dates.push_back(format_iso_date(first + std::chrono::days{d}));
  panel.forecasts = Eigen::MatrixXd::Constant(days, n, kMissing);
  panel.actuals = Eigen::MatrixXd::Constant(days, n, kMissing);
  panel.errors = Eigen::MatrixXd::Constant(days, n, kMissing);
  for (const auto& e : entries) {
    const auto t = static_cast<Eigen::Index>((e.day - first).count());
    const auto i = static_cast<Eigen::Index>(e.city);
    panel.forecasts(t, i) = e.forecast;
    panel.actuals(t, i) = e.actual;
    panel.errors(t, i) = (is_missing(e.forecast) || is_missing(e.actual)) ? kMissing
                                                                          : e.forecast - e.actual;
  }
  panel.warnings = rep.warnings;
  return panel;
}

ObservationPanel ingest(const std::filesystem::path& path, int horizon, IngestReport* report) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return ingest(in, horizon, report, path.string());
}

std::string format_panel(const ObservationPanel& panel) {
  std::string out = kPanelHeader;
  out.push_back('\n');
  const std::string h = std::to_string(panel.horizon);
  for (int t = 0; t < panel.num_days(); ++t) {
    for (int i = 0; i < panel.num_locations(); ++i) {
      const auto& loc = panel.locations[static_cast<std::size_t>(i)];
      const double F = panel.has_raw() ? panel.forecasts(t, i) : panel.errors(t, i);
      const double A = panel.has_raw() ? panel.actuals(t, i) : (is_missing(F) ? kMissing : 0.0);
      out += csv::join({panel.dates[static_cast<std::size_t>(t)], loc.id, loc.name,
                        csv::number(loc.lon), csv::number(loc.lat), h, csv::number(F),
                        csv::number(A)});
      out.push_back('\n');
    }
  }
  return out;
}

void write_panel(const std::filesystem::path& path, const ObservationPanel& panel) {
  csv::write_file_atomic(path, format_panel(panel));
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string panel_fingerprint(const ObservationPanel& panel) {
  std::string blob;
  for (const auto& d : panel.dates) blob += d + ";";
  for (const auto& l : panel.locations) blob += l.id + "@" + csv::number(l.lon) + "," + csv::number(l.lat) + ";";
  for (Eigen::Index t = 0; t < panel.errors.rows(); ++t)
    for (Eigen::Index i = 0; i < panel.errors.cols(); ++i) blob += csv::number(panel.errors(t, i)) + ",";
  return fnv1a_hex(blob);
}

}  // namespace fts
