#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace kncli {

using Json = nlohmann::ordered_json;

/// Shortest decimal text that round-trips, locale-free.
std::string fmt(double v);

/// CSV with a "# kerrnoise <version> config=<hash>" comment line and a header row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& config_hash, const std::vector<std::string>& columns);
  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(int v);
  CsvWriter& operator<<(const std::string& v);
  void end_row();

 private:
  void separator();
  std::ofstream out_;
  std::filesystem::path path_;
  bool row_started_ = false;
};

/// JSON object pre-filled with version and config hash.
Json json_header(const std::string& config_hash);
void write_json(const std::filesystem::path& path, const Json& j);
/// Splits a newline-separated warning block into an array.
Json warning_list(const std::string& block);

}  // namespace kncli
