#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace optocool {

// Column-labelled rows of numbers and labels; serialized by emit_table.
class Table {
 public:
  using Cell = std::variant<double, std::int64_t, std::string>;
  using Row = std::vector<Cell>;

  Table() = default;
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  void add_row(Row row);
  void append(const Table& other);

  std::size_t column_index(std::string_view name) const;
  double number(std::size_t row, std::string_view column) const;
  std::string text(std::size_t row, std::string_view column) const;

 private:
  std::vector<std::string> columns_;
  std::vector<Row> rows_;
};

enum class OutputFormat { csv, json };

OutputFormat output_format_from_string(std::string_view name);

// 12 significant digits, '.' decimal point; nan/inf spelled out.
std::string format_number(double value);

std::string to_csv(const Table& table);
std::string to_json(const Table& table, const nlohmann::ordered_json& meta);

std::string emit_table(const Table& table, OutputFormat format,
                       const nlohmann::ordered_json& meta = nlohmann::ordered_json::object());

}  // namespace optocool
