#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace serilin {

/// Locale-free shortest-exact formatting with 17 significant digits.
std::string format_number(double value);

using CsvCell = std::variant<double, long long, std::string>;

/// Minimal CSV writer: '.' decimal, no quoting beyond what plain identifiers need.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<CsvCell>& cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& value);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace serilin
