#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "fts/panel.hpp"

namespace fts {

/// Column order of the canonical forecast table.
inline constexpr const char* kPanelHeader =
    "date,city_id,city_name,longitude,latitude,horizon_days,forecast_F,actual_F";

struct IngestReport {
  std::vector<std::string> rejected;  // "line N: reason"
  std::vector<std::string> warnings;
};

/// Reads the canonical table and keeps rows for `horizon`, building
/// Y = forecast - actual. Rows with unparseable values are skipped and
/// reported; blank forecast or actual fields mark the entry missing.
ObservationPanel ingest(std::istream& in, int horizon, IngestReport* report = nullptr,
                        const std::string& source = "<stream>");
ObservationPanel ingest(const std::filesystem::path& path, int horizon,
                        IngestReport* report = nullptr);

/// Canonical table text for a panel, one row per (day, location).
std::string format_panel(const ObservationPanel& panel);
void write_panel(const std::filesystem::path& path, const ObservationPanel& panel);

/// FNV-1a 64-bit digest, hex encoded.
std::string fnv1a_hex(std::string_view bytes);

/// Digest over dates, location ids and coordinates, and every error value.
std::string panel_fingerprint(const ObservationPanel& panel);

}  // namespace fts
