#include "wasep/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace wasep {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  if (header.empty()) throw std::invalid_argument("csv: empty header");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += header[i];
  }
  buf_ += '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (!open_) throw std::logic_error("csv: writer already closed");
  if (cells.size() != columns_)
    throw std::invalid_argument("csv: row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buf_ += ',';
    if (auto* d = std::get_if<double>(&cells[i]))
      buf_ += format_real(*d);
    else if (auto* n = std::get_if<long long>(&cells[i]))
      buf_ += std::to_string(*n);
    else
      buf_ += std::get<std::string>(cells[i]);
  }
  buf_ += '\n';
}

void CsvWriter::close() {
  if (!open_) return;
  open_ = false;
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw std::runtime_error("csv: cannot open " + path_);
  out.write(buf_.data(), (std::streamsize)buf_.size());
  if (!out) throw std::runtime_error("csv: write failed for " + path_);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checksum: cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return fnv1a64(bytes);
}

std::string write_manifest(const std::string& dir,
                           const std::string& config_json,
                           const std::vector<std::string>& output_files,
                           double wall_clock_seconds) {
  nlohmann::json man;
  man["version"] = "1.0.0";
  man["config"] = nlohmann::json::parse(config_json);
  man["wall_clock_seconds"] = wall_clock_seconds;
  auto& outs = man["outputs"] = nlohmann::json::array();
  for (const auto& f : output_files) {
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  (unsigned long long)fnv1a64_file(dir + "/" + f));
    outs.push_back({{"file", f}, {"fnv1a64", hex}});
  }
  std::string path = dir + "/manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("manifest: cannot open " + path);
  std::string text = man.dump(2);
  text += '\n';
  out.write(text.data(), (std::streamsize)text.size());
  return path;
}

} // namespace wasep
