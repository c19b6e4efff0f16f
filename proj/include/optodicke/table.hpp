// Result tables and their CSV / JSON encodings.
#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace optodicke {

using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
  std::string note;  // written as a header comment / "units" member
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// 9 significant digits, "%.9g" style.
std::string format_number(double value);

/// Value as it appears after a write/parse round trip.
double rounded(double value);

/// '#'-prefixed note line, header row, then one line per row. Fields with
/// commas, quotes or line breaks are quoted; empty cells stay empty.
void write_csv(const Table& table, std::ostream& out);

/// {"units": note, "columns": [...], "rows": [{column: value, ...}, ...]};
/// empty cells are null.
void write_json(const Table& table, std::ostream& out);

}  // namespace optodicke
