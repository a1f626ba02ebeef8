#include "pcz/csv.hpp"

#include <charconv>
#include <fstream>

#include "pcz/types.hpp"

namespace pcz {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != columns_) throw InvalidArgument("csv: row has the wrong number of columns");
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) text_ += ',';
    text_ += format_double(row[i]);
  }
  text_ += '\n';
  ++rows_;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path partial = path;
  partial += ".partial";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + partial.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + partial.string());
  }
  std::error_code ec;
  std::filesystem::rename(partial, path, ec);
  if (ec) throw Error("cannot rename " + partial.string() + ": " + ec.message());
}

}  // namespace pcz
