#include "ccbounds/table.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ccbounds {

void Table::add_row(std::initializer_list<double> values) {
  if (values.size() != columns.size())
    throw std::invalid_argument("Table::add_row: row width differs from header");
  rows.emplace_back(values);
}

namespace {

const char* format_value(double v, char (&buf)[40]) {
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << '\n';
  char buf[40];
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << format_value(row[c], buf);
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json j;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    auto& column = j[table.columns[c]] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) column.push_back(row[c]);
  }
  out << j.dump(2) << '\n';
}

}  // namespace ccbounds
