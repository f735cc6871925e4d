#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lcf::driver {

/// Column-named numeric table.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  bool empty() const { return rows.empty(); }
  std::size_t column(const std::string& name) const;
};

/// 17 significant digits, '.' decimal point regardless of locale.
std::string format_number(double v);

void write_csv(std::ostream& out, const Table& table);

/// Writes `table` to `path`. An empty table is rejected before the file is
/// opened; I/O failures name the path.
void emit_csv(const Table& table, const std::filesystem::path& path);

Table read_csv(const std::filesystem::path& path);

}  // namespace lcf::driver
