#ifndef CCBOUNDS_TABLE_HPP
#define CCBOUNDS_TABLE_HPP

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

namespace ccbounds {

/** Numeric table with a fixed header; rows match the header in width. */
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::initializer_list<double> values);
};

/** Header row plus data rows, values at 12 significant digits. */
void write_csv(std::ostream& out, const Table& table);

/** The same table as a JSON object of per-column arrays, in header order. */
void write_json(std::ostream& out, const Table& table);

}  // namespace ccbounds

#endif
