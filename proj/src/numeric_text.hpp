#pragma once

// Locale-independent parsing of numeric text (config values, table files).

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace kerrnoise::detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Parses a complete decimal string. Accepts "inf"/"+inf" for zero-temperature
/// baths; rejects trailing garbage.
inline std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text == "inf" || text == "+inf" || text == "infinity")
    return std::numeric_limits<double>::infinity();
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

/// Reads whitespace- or comma-separated numeric rows with exactly `columns`
/// entries. '#' starts a comment.
inline std::vector<std::vector<double>> read_numeric_columns(const std::filesystem::path& path,
                                                              std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos < view.size()) {
      const auto start = view.find_first_not_of(" \t,", pos);
      if (start == std::string_view::npos) break;
      auto stop = view.find_first_of(" \t,", start);
      if (stop == std::string_view::npos) stop = view.size();
      const auto value = parse_double(view.substr(start, stop - start));
      if (!value || !std::isfinite(*value))
        throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                          std::string(view.substr(start, stop - start)) + "'");
      row.push_back(*value);
      pos = stop;
    }
    if (row.size() != columns)
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(columns) + " columns, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace kerrnoise::detail
