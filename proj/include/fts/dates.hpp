#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace fts {

/// Parses yyyy-mm-dd; nullopt for anything else or an invalid calendar date.
std::optional<std::chrono::sys_days> parse_iso_date(std::string_view text);

std::string format_iso_date(std::chrono::sys_days day);

/// Calendar date `days` after an ISO date. Throws InvalidConfig on bad input.
std::string add_days(const std::string& iso_date, int days);

}  // namespace fts
