#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace wasep {

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_real(double v);

using Cell = std::variant<double, long long, std::string>;

/// CSV with a header row, comma separators, '.' decimals, LF endings.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<Cell>& cells);
  void close();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string buf_;
  std::size_t columns_;
  bool open_ = true;
};

std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t fnv1a64_file(const std::string& path);

/// Writes <dir>/manifest.json listing every produced file with its checksum
/// alongside the configuration echo. Returns the manifest path.
std::string write_manifest(const std::string& dir,
                           const std::string& config_json,
                           const std::vector<std::string>& output_files,
                           double wall_clock_seconds);

} // namespace wasep
