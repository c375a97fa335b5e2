#include "cofee/csv.hpp"

#include "cofee/error.hpp"
#include "strings.hpp"

namespace cofee {

std::vector<CsvRow> parse_csv(std::string_view data) {
  if (data.substr(0, 3) == "\xEF\xBB\xBF") data.remove_prefix(3);
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool in_quotes = false;
  bool row_started = false;
  int line = 1;
  const std::size_t n = data.size();
  for (std::size_t i = 0; i < n; ++i) {
    char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && data[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
          if (i + 1 < n && data[i + 1] != ',' && data[i + 1] != '\n' && data[i + 1] != '\r') {
            throw ParseError("CSV line " + std::to_string(line) +
                             ": unexpected character after closing quote");
          }
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw ParseError("CSV line " + std::to_string(line) + ": quote inside unquoted field");
        }
        in_quotes = true;
        row_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_started = true;
        break;
      case '\r':
        if (i + 1 < n && data[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        if (row_started || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        field.clear();
        row.clear();
        row_started = false;
        ++line;
        break;
      default:
        field += c;
        row_started = true;
    }
  }
  if (in_quotes) throw ParseError("CSV: unterminated quoted field");
  if (row_started || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

CsvTable CsvTable::parse(std::string_view data) {
  CsvTable t;
  auto rows = parse_csv(data);
  if (rows.empty()) throw ParseError("CSV: missing header row");
  t.header_ = std::move(rows.front());
  for (std::size_t i = 0; i < t.header_.size(); ++i) {
    if (!t.index_.emplace(t.header_[i], i).second) {
      throw ParseError("CSV: duplicate column " + internal::quote(t.header_[i]));
    }
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != t.header_.size()) {
      throw ParseError("CSV record " + std::to_string(r) + ": expected " +
                       std::to_string(t.header_.size()) + " fields, got " +
                       std::to_string(rows[r].size()));
    }
    t.rows_.push_back(std::move(rows[r]));
  }
  return t;
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t CsvTable::require_column(std::string_view name) const {
  auto c = column(name);
  if (!c) throw ParseError("CSV: missing column " + internal::quote(name));
  return *c;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += "\r\n";
  return out;
}

}  // namespace cofee
