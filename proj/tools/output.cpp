#include "output.hpp"

#include <kerrnoise/kerrnoise.h>

#include <charconv>
#include <cmath>
#include <sstream>

#include "config.hpp"

namespace kncli {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& config_hash,
                     const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), path_(path) {
  if (!out_) throw ConfigError("cannot write " + path.string());
  out_ << "# kerrnoise " << kn_version() << " config=" << config_hash << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::separator() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::operator<<(double v) {
  separator();
  out_ << fmt(v);
  return *this;
}

CsvWriter& CsvWriter::operator<<(int v) {
  separator();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
  separator();
  out_ << v;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
  if (!out_) throw ConfigError("write failed: " + path_.string());
}

Json json_header(const std::string& config_hash) {
  Json j;
  j["version"] = kn_version();
  j["config_hash"] = config_hash;
  return j;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Json warning_list(const std::string& block) {
  Json arr = Json::array();
  std::istringstream in(block);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) arr.push_back(line);
  return arr;
}

}  // namespace kncli
