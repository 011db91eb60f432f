#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/io/manifest.hpp"

namespace casimir::io {

/// Formats a double with 12 significant digits (the CSV dialect).
inline std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// CSV with '#'-prefixed header lines carrying the run manifest and its
/// content hash. Rows are plain comma-separated values.
struct CsvDocument {
  RunManifest manifest;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) {
    if (row.size() != columns.size())
      throw std::logic_error("CsvDocument: row width mismatch");
    rows.push_back(std::move(row));
  }

  std::string serialize() const {
    std::ostringstream os;
    os << "# " << manifest.tool << " " << manifest.command << " v"
       << manifest.version << "\n";
    os << "# manifest: " << manifest.to_json().dump() << "\n";
    os << "# config-hash: " << manifest.config_hash() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        os << (i ? "," : "") << row[i];
      os << "\n";
    }
    return os.str();
  }

  static CsvDocument parse(std::istream& in) {
    CsvDocument doc;
    std::string line;
    bool have_columns = false;
    bool have_manifest = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line[0] == '#') {
        const std::string key = "# manifest: ";
        if (line.rfind(key, 0) == 0) {
          doc.manifest = RunManifest::from_json(json::parse(line.substr(key.size())));
          have_manifest = true;
        }
        continue;
      }
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (!have_columns) {
        doc.columns = std::move(cells);
        have_columns = true;
      } else {
        if (cells.size() != doc.columns.size())
          throw std::runtime_error("CsvDocument: ragged row");
        doc.rows.push_back(std::move(cells));
      }
    }
    if (!have_manifest)
      throw std::runtime_error("CsvDocument: missing manifest header");
    if (!have_columns) throw std::runtime_error("CsvDocument: missing columns");
    return doc;
  }

  int column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return static_cast<int>(i);
    throw std::runtime_error("CsvDocument: no column named " + name);
  }

  std::vector<double> column_as_double(const std::string& name) const {
    const int idx = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(std::stod(row[idx]));
    return out;
  }
};

/// Writes text to a file, or to stdout when path is "-". Throws
/// std::ios_base::failure on I/O errors.
inline void write_text_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw std::ios_base::failure("failed writing to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path);
  out << text;
  out.flush();
  if (!out) throw std::ios_base::failure("failed writing " + path);
}

}  // namespace casimir::io
