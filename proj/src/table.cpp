#include "dlambda/table.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "json.hpp"

namespace dlambda {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

namespace {

double round_to_printed(double value) {
  const std::string s = format_number(value);
  double parsed = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), parsed);
  return parsed;
}

}  // namespace

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (const double* v = std::get_if<double>(&row[i])) {
        out << format_number(*v);
      } else {
        out << std::get<std::string>(row[i]);
      }
    }
    out << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["command"] = table.command;
  doc["columns"] = table.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) {
      if (const double* v = std::get_if<double>(&cell)) {
        if (std::isfinite(*v)) {
          r.push_back(round_to_printed(*v));
        } else {
          r.push_back(nullptr);
        }
      } else {
        r.push_back(std::get<std::string>(cell));
      }
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

}  // namespace dlambda
