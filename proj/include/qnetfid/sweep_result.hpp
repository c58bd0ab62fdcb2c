#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qnetfid {

struct NotAvailable {
  friend bool operator==(NotAvailable, NotAvailable) { return true; }
};

/// One CSV cell. Doubles print with 12 significant digits, booleans as
/// true/false, NotAvailable as NA.
using Cell = std::variant<NotAvailable, double, long long, bool, std::string>;

struct SweepMetadata {
  std::string command_line;
  std::uint64_t seed = 0;
  std::string version;
  std::string rng_algorithm;
  std::optional<std::string> timestamp;
};

/// Plot-ready table. Every row carries one cell per column.
struct SweepResult {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  SweepMetadata metadata;

  std::size_t column_index(const std::string& name) const;
  const Cell& at(std::size_t row, const std::string& column) const;
  double number(std::size_t row, const std::string& column) const;
  void add_row(std::vector<Cell> row);
  /// Appends the rows of `other`, which must have identical columns.
  void append(const SweepResult& other);
};

std::string format_cell(const Cell& cell);
/// Header row plus data rows; ',' separator, LF line endings.
void write_csv(const SweepResult& result, std::ostream& out);

}  // namespace qnetfid
