#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "rswz/errors.hpp"

namespace rswz {

// Shortest round-trippable decimal form; stable across runs on one platform.
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path), ncols_(header.size()) {
    if (!out_) throw ConfigError("cannot open output file '" + path + "'");
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != ncols_) throw ConfigError("csv row width mismatch");
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out_ << ',';
      out_ << cells[k];
    }
    out_ << '\n';
  }

  void close() { out_.close(); }

 private:
  std::ofstream out_;
  std::size_t ncols_;
};

}  // namespace rswz
