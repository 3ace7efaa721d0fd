#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fts::csv {

/// Splits one CSV record. Double-quoted fields may contain commas and
/// doubled quotes.
std::vector<std::string> split_line(std::string_view line);

/// Quotes the field when it contains a comma, quote, or newline.
std::string escape(std::string_view field);

/// Shortest decimal that round-trips to the same double; "" for NaN.
std::string number(double value);

std::string join(const std::vector<std::string>& fields);

/// Parses a double. Empty or whitespace-only text is NaN; anything that is
/// not a complete number returns false. "inf" and "-inf" are accepted only
/// with allow_infinite.
bool parse_number(std::string_view text, double& out, bool allow_infinite = false);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws Io when absent.
  std::size_t column(std::string_view name) const;
};

Table read_table(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace fts::csv
