#include "optocool/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "optocool/errors.hpp"

namespace optocool {

void Table::add_row(Row row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                std::to_string(columns_.size()) + " columns");
  }
  rows_.push_back(std::move(row));
}

void Table::append(const Table& other) {
  if (other.columns_ != columns_) throw std::invalid_argument("appending table with other columns");
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

std::size_t Table::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw std::out_of_range("no column '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::string_view column) const {
  const Cell& c = rows_.at(row).at(column_index(column));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw std::invalid_argument("column '" + std::string(column) + "' is not numeric");
}

std::string Table::text(std::size_t row, std::string_view column) const {
  const Cell& c = rows_.at(row).at(column_index(column));
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return format_number(std::get<double>(c));
}

OutputFormat output_format_from_string(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + std::string(name) + "' (csv|json)");
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

namespace {

std::string csv_cell(const Table::Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

nlohmann::ordered_json json_cell(const Table::Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    // round-trip through the 12-digit text so JSON and CSV carry the same value
    return std::strtod(format_number(*d).c_str(), nullptr);
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns().size(); ++i) {
    if (i) out += ',';
    out += table.columns()[i];
  }
  out += '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table, const nlohmann::ordered_json& meta) {
  nlohmann::ordered_json doc;
  doc["meta"] = meta;
  doc["columns"] = table.columns();
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows()) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns()[i]] = json_cell(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string emit_table(const Table& table, OutputFormat format,
                       const nlohmann::ordered_json& meta) {
  return format == OutputFormat::csv ? to_csv(table) : to_json(table, meta);
}

}  // namespace optocool
