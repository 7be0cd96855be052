#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "spinwalk/errors.hpp"

namespace spinwalk {

namespace detail {

inline std::string csv_cell(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
inline std::string csv_cell(int v) { return std::to_string(v); }
inline std::string csv_cell(long v) { return std::to_string(v); }
inline std::string csv_cell(long long v) { return std::to_string(v); }
inline std::string csv_cell(std::size_t v) { return std::to_string(v); }
inline std::string csv_cell(const char* v) { return v; }
inline std::string csv_cell(const std::string& v) { return v; }

}  // namespace detail

/// Writes comma-separated rows with a header; doubles carry 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : os_(path) {
    if (!os_) throw config_error("cannot open output file " + path.string());
    std::string line;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) line += ",";
      line += header[i];
    }
    os_ << line << "\n";
  }

  template <class... Ts>
  void row(const Ts&... vals) {
    std::string line;
    bool first = true;
    ((line += (first ? (first = false, std::string()) : std::string(",")),
      line += detail::csv_cell(vals)),
     ...);
    os_ << line << "\n";
  }

  void close() { os_.close(); }

 private:
  std::ofstream os_;
};

}  // namespace spinwalk
