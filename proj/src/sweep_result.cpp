#include "qnetfid/sweep_result.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "qnetfid/error.hpp"

namespace qnetfid {

std::size_t SweepResult::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidArgument("no column named '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

const Cell& SweepResult::at(std::size_t row, const std::string& column) const {
  return rows.at(row).at(column_index(column));
}

double SweepResult::number(std::size_t row, const std::string& column) const {
  const Cell& c = at(row, column);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  throw InvalidArgument("column '" + column + "' is not numeric in row " + std::to_string(row));
}

void SweepResult::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw InvalidArgument("row has " + std::to_string(row.size()) + " cells, expected " +
                          std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

void SweepResult::append(const SweepResult& other) {
  if (other.columns != columns) throw InvalidArgument("cannot append sweeps with different columns");
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

std::string format_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(NotAvailable) const { return "NA"; }
    std::string operator()(double d) const {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.12g", d);
      return buf;
    }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string quoted = "\"";
      for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      return quoted + "\"";
    }
  };
  return std::visit(Visitor{}, cell);
}

void write_csv(const SweepResult& result, std::ostream& out) {
  for (std::size_t i = 0; i < result.columns.size(); ++i) {
    if (i) out << ',';
    out << result.columns[i];
  }
  out << '\n';
  for (const auto& row : result.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_cell(row[i]);
    }
    out << '\n';
  }
}

}  // namespace qnetfid
