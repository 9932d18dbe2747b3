#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace dlambda {

/// Locale-independent shortest form with 12 significant digits.
std::string format_number(double value);

using Cell = std::variant<double, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Header line naming the columns, then one comma-separated line per row.
void write_csv(const Table& table, std::ostream& out);
/// {"command": ..., "columns": [...], "rows": [[...], ...]}; numbers carry the
/// same 12 significant digits as the CSV, NaN becomes null.
void write_json(const Table& table, std::ostream& out);

}  // namespace dlambda
