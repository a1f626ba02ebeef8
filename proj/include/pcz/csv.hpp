#pragma once

// CSV text with shortest round-trip number formatting, and atomic file output.

#include <filesystem>
#include <string>
#include <vector>

namespace pcz {

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& row);
  std::size_t rows() const { return rows_; }
  const std::string& text() const { return text_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

// Writes to "<path>.partial" and renames on success; a failed write leaves
// only the .partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace pcz
