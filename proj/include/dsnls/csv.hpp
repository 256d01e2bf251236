#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace ds {

/// Shortest round-trip decimal form ("nan", "inf", "-inf" for non-finite).
std::string format_double(double v);

/// CSV text with a single header row, ',' separator, '.' decimal and LF endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  class Row {
   public:
    Row& operator<<(double v);
    Row& operator<<(long long v);
    Row& operator<<(int v) { return *this << static_cast<long long>(v); }
    Row& operator<<(std::size_t v) { return *this << static_cast<long long>(v); }
    Row& operator<<(std::string_view s);
    Row& operator<<(const char* s) { return *this << std::string_view(s); }
    ~Row();

   private:
    friend class CsvTable;
    explicit Row(CsvTable& t) : t_(t) {}
    CsvTable& t_;
    std::vector<std::string> cells_;
  };

  Row row() { return Row(*this); }
  const std::string& str() const noexcept { return text_; }
  std::size_t rows() const noexcept { return rows_; }
  void write(const std::string& path) const;

 private:
  std::size_t cols_;
  std::size_t rows_ = 0;
  std::string text_;
};

}  // namespace ds
