#include "dsnls/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "dsnls/errors.hpp"

namespace ds {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : cols_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += '\n';
}

CsvTable::Row& CsvTable::Row::operator<<(double v) {
  cells_.push_back(format_double(v));
  return *this;
}

CsvTable::Row& CsvTable::Row::operator<<(long long v) {
  cells_.push_back(std::to_string(v));
  return *this;
}

CsvTable::Row& CsvTable::Row::operator<<(std::string_view s) {
  if (s.find_first_of(",\"\n") != std::string_view::npos) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    cells_.push_back(q + "\"");
  } else {
    cells_.emplace_back(s);
  }
  return *this;
}

CsvTable::Row::~Row() {
  for (std::size_t i = 0; i < cells_.size(); ++i) t_.text_ += (i ? "," : "") + cells_[i];
  // Short rows are padded so every line has the header's column count.
  for (std::size_t i = std::max<std::size_t>(cells_.size(), 1); i < t_.cols_; ++i) t_.text_ += ',';
  t_.text_ += '\n';
  ++t_.rows_;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << text_;
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace ds
