#include "optodicke/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "json.hpp"

namespace optodicke {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

double rounded(double value) { return std::strtod(format_number(value).c_str(), nullptr); }

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string cell_text(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  if (const auto* s = std::get_if<std::string>(&cell)) return csv_field(*s);
  return {};
}

}  // namespace

void write_csv(const Table& table, std::ostream& out) {
  if (!table.note.empty()) out << "# " << table.note << "\r\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << csv_field(table.columns[c]);
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell_text(row[c]);
    out << "\r\n";
  }
}

void write_json(const Table& table, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["units"] = table.note;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
      const auto& cell = row[c];
      if (const auto* d = std::get_if<double>(&cell))
        obj[table.columns[c]] = rounded(*d);
      else if (const auto* s = std::get_if<std::string>(&cell))
        obj[table.columns[c]] = *s;
      else
        obj[table.columns[c]] = nullptr;
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << "\n";
}

}  // namespace optodicke
