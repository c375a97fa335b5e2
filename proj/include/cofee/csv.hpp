#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cofee {

// RFC 4180 with the usual relaxations: optional UTF-8 BOM, LF or CRLF line
// ends, quoted fields may contain separators, quotes ("") and line breaks.
// A final line break is optional. Fields are returned byte-exact.
using CsvRow = std::vector<std::string>;
std::vector<CsvRow> parse_csv(std::string_view data);

// Header-addressed view over parsed rows. Throws ParseError on duplicate
// header names or rows whose width differs from the header.
class CsvTable {
 public:
  static CsvTable parse(std::string_view data);

  const CsvRow& header() const { return header_; }
  const std::vector<CsvRow>& rows() const { return rows_; }
  std::optional<std::size_t> column(std::string_view name) const;
  // Throws ParseError naming the missing column.
  std::size_t require_column(std::string_view name) const;

 private:
  CsvRow header_;
  std::vector<CsvRow> rows_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Quotes a field when it holds a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);
// Fields joined by commas, terminated by CRLF.
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace cofee
