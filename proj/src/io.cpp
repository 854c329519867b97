// SPDX-License-Identifier: MIT

#include "bgk/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bgk/errors.hpp"

namespace bgk::io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw Error(ErrorCode::ParseError, "short write to " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw Error(ErrorCode::ParseError, "cannot create directory " + path);
}

Csv::Csv(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += header[i];
  }
  buf_ += '\n';
}

Csv::Csv(const std::string& header_line)
    : columns_(static_cast<std::size_t>(
          std::count(header_line.begin(), header_line.end(), ',') + 1)) {
  buf_ = header_line + "\n";
}

void Csv::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw Error(ErrorCode::BadBounds, "csv row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += fmt(values[i]);
  }
  buf_ += '\n';
}

void Csv::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw Error(ErrorCode::BadBounds, "csv row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += cells[i];
  }
  buf_ += '\n';
}

void Csv::save(const std::string& path) const { write_file(path, buf_); }

}  // namespace bgk::io
