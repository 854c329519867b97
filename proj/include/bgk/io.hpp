// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

namespace bgk::io {

/// Shortest round-trip decimal form (%.17g); used for every numeric field in
/// CSV and report output so identical runs serialize to identical bytes.
std::string fmt(double v);

void write_file(const std::string& path, const std::string& content);

/// Reads a whole file; throws Error(ParseError) when it cannot be opened.
std::string read_file(const std::string& path);

/// Creates the directory (and parents) if needed.
void ensure_dir(const std::string& path);

/// Minimal CSV accumulator: fixed column set, one row at a time.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  /// Convenience: header as one comma-joined line.
  explicit Csv(const std::string& header_line);
  explicit Csv(const char* header_line) : Csv(std::string(header_line)) {}
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);
  const std::string& text() const { return buf_; }
  void save(const std::string& path) const;

 private:
  std::string buf_;
  std::size_t columns_;
};

}  // namespace bgk::io
